#pragma once

#include "emu/check.hpp"
#include "emu/error.hpp"
#include "emu/growth.hpp"
#include "emu/holder.hpp"
#include "emu/mspace.hpp"
#include "emu/numeric.hpp"
#include "emu/opemu.hpp"
#include "emu/orlicz.hpp"
#include "emu/young.hpp"
