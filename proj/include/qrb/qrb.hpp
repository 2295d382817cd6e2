#pragma once

// Umbrella header for the qudit randomised-benchmarking toolkit.

#include "qrb/analysis.hpp"
#include "qrb/channels.hpp"
#include "qrb/gateset.hpp"
#include "qrb/parallel.hpp"
#include "qrb/rbsim.hpp"
#include "qrb/residue.hpp"
#include "qrb/rng.hpp"
#include "qrb/twirl.hpp"
#include "qrb/weyl.hpp"
