#include "devstrip/devstrip.hpp"
int main(){return 0;}
