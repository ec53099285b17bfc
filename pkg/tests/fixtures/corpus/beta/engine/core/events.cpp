#include "events.h"
#include <platform/thread.h>
