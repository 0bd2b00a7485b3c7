#include <doctest.h>

#include "stablefields/harness.hpp"
