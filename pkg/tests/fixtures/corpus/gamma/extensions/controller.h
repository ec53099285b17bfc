#pragma once
#include <Xinput.h>
