#include <doctest.h>

#include "fieldroad/linsolve.hpp"

using namespace fieldroad;
