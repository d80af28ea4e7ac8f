#include <doctest.h>

#include "fieldroad/model.hpp"

using namespace fieldroad;
