#include <doctest.h>

#include "fieldroad/exhaust.hpp"

using namespace fieldroad;
