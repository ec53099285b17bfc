#include "loader.h"
#include <core/engine.h>
#include "texture.h"
