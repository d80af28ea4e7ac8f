#include <doctest.h>

#include "fieldroad/field.hpp"

using namespace fieldroad;
