#pragma once
#include <platform/socket.h>
