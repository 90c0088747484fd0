#pragma once

// Convenience header pulling in the whole library.
#include "lmg/entanglement.hpp"
#include "lmg/error.hpp"
#include "lmg/io.hpp"
#include "lmg/linalg.hpp"
#include "lmg/model.hpp"
#include "lmg/oracle.hpp"
#include "lmg/sweeps.hpp"
#include "lmg/verification.hpp"
