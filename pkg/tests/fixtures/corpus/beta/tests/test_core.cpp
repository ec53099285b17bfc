#include <core/engine.h>
#include <gtest/gtest.h>
