#pragma once

// Relativistic step-barrier scattering for spin-1/2 plane waves and beams:
// regime classification, boundary matching, reflection phase, lateral beam
// displacement with two independent numerical oracles.

#include "diracgh/errors.hpp"
#include "diracgh/ghshift.hpp"
#include "diracgh/kinematics.hpp"
#include "diracgh/linsolve.hpp"
#include "diracgh/matching.hpp"
#include "diracgh/run.hpp"
#include "diracgh/spinors.hpp"
#include "diracgh/wavepacket.hpp"
