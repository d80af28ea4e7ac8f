#include <doctest.h>

#include "fieldroad/oracle.hpp"

using namespace fieldroad;
