#pragma once

#include "erwlab/coeffs.hpp"
#include "erwlab/distances.hpp"
#include "erwlab/distribution.hpp"
#include "erwlab/errors.hpp"
#include "erwlab/lattice.hpp"
#include "erwlab/lil.hpp"
#include "erwlab/moments.hpp"
#include "erwlab/normal.hpp"
#include "erwlab/parallel.hpp"
#include "erwlab/rates.hpp"
#include "erwlab/regression.hpp"
#include "erwlab/rng.hpp"
#include "erwlab/sampling.hpp"
#include "erwlab/step_law.hpp"
#include "erwlab/superdiffusive.hpp"
#include "erwlab/walk.hpp"
