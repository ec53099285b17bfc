#pragma once
#include "socket.h"
