#pragma once

#include "pbqr/av_pipeline.hpp"
#include "pbqr/errors.hpp"
#include "pbqr/lp.hpp"
#include "pbqr/maxflow.hpp"
#include "pbqr/mbf.hpp"
#include "pbqr/oracle.hpp"
#include "pbqr/poly.hpp"
#include "pbqr/poly_io.hpp"
#include "pbqr/quartic.hpp"
#include "pbqr/rational.hpp"
#include "pbqr/reduce_general.hpp"
#include "pbqr/subset.hpp"
