#include <doctest.h>

#include "fieldroad/monotone.hpp"

using namespace fieldroad;
