#pragma once

#include "hornlab/rational.hpp"
#include "hornlab/semiring.hpp"
#include "hornlab/matrix.hpp"
#include "hornlab/tableau.hpp"
#include "hornlab/network.hpp"
#include "hornlab/paths.hpp"
#include "hornlab/simplex.hpp"
#include "hornlab/hive.hpp"
#include "hornlab/gz_sampler.hpp"
#include "hornlab/linalg.hpp"
#include "hornlab/tropical_horn.hpp"
#include "hornlab/measure.hpp"
#include "hornlab/io.hpp"
#include "hornlab/config.hpp"
