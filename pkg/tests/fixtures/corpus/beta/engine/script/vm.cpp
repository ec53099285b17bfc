#include <core/events.h>
#include "lua.h"
