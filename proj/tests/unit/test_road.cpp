#include <doctest.h>

#include "fieldroad/road.hpp"

using namespace fieldroad;
