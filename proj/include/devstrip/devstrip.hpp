#pragma once

#include "devstrip/conversion.hpp"
#include "devstrip/curve.hpp"
#include "devstrip/energy.hpp"
#include "devstrip/io.hpp"
#include "devstrip/knots.hpp"
#include "devstrip/mapping.hpp"
#include "devstrip/optimizer.hpp"
#include "devstrip/polynomial.hpp"
#include "devstrip/preprocess.hpp"
#include "devstrip/surface.hpp"
