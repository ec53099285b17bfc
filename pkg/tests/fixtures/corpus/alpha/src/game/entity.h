#pragma once
#include "../core/os.h"
