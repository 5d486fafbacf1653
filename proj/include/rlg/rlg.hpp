#pragma once

#include "rlg/bigint.hpp"
#include "rlg/census.hpp"
#include "rlg/error.hpp"
#include "rlg/experiments.hpp"
#include "rlg/io.hpp"
#include "rlg/multigraph.hpp"
#include "rlg/nbcore.hpp"
#include "rlg/parallel.hpp"
#include "rlg/plot.hpp"
#include "rlg/rng.hpp"
#include "rlg/sampler.hpp"
#include "rlg/spectra.hpp"
#include "rlg/theory.hpp"
