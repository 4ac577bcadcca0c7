#pragma once

// Umbrella header for the Anda toolkit.

#include "anda/apu.hpp"
#include "anda/bops.hpp"
#include "anda/bpc.hpp"
#include "anda/container.hpp"
#include "anda/errors.hpp"
#include "anda/group.hpp"
#include "anda/half.hpp"
#include "anda/layout.hpp"
#include "anda/matrix.hpp"
#include "anda/oracle.hpp"
#include "anda/search.hpp"
#include "anda/sim.hpp"
#include "anda/tensor.hpp"
#include "anda/weights.hpp"
#include "anda/workload.hpp"
