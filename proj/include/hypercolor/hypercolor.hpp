#pragma once

#include "hypercolor/coloring.hpp"
#include "hypercolor/errors.hpp"
#include "hypercolor/experiments.hpp"
#include "hypercolor/format.hpp"
#include "hypercolor/hypergraph.hpp"
#include "hypercolor/lemmas.hpp"
#include "hypercolor/moments.hpp"
#include "hypercolor/overlap.hpp"
#include "hypercolor/rng.hpp"
#include "hypercolor/roots.hpp"
#include "hypercolor/thresholds.hpp"
