#include "editor.h"
#include "game/world.h"
#include "render/shader.h"
