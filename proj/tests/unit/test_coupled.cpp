#include <doctest.h>

#include "fieldroad/coupled.hpp"

using namespace fieldroad;
