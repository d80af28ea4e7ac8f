#include <doctest.h>

#include "fieldroad/eigen.hpp"

using namespace fieldroad;
