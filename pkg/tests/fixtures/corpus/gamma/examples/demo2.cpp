#include "gamma.h"
#include <iostream>
