#include "renderer.h"
#include <core/engine.h>
#include <d3d11.h>
#include <platform/thread.h>
