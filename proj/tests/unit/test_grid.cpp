#include <doctest.h>

#include "fieldroad/grid.hpp"

using namespace fieldroad;
