#include "strutil.h"
#include <cstring>
