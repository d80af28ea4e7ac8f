#include <doctest.h>

#include "fieldroad/tworoad.hpp"

using namespace fieldroad;
