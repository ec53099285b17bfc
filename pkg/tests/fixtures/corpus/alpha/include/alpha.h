#pragma once
#include "../src/core/os.h"
