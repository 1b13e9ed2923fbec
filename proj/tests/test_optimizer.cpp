#include <catch2/catch_amalgamated.hpp>
#include "fixtures.hpp"
TEST_CASE("placeholder test_optimizer") { CHECK(true); }
