#pragma once

#include "vexint/calderon.hpp"
#include "vexint/corpus.hpp"
#include "vexint/error.hpp"
#include "vexint/exponents.hpp"
#include "vexint/grid.hpp"
#include "vexint/interp.hpp"
#include "vexint/kernels.hpp"
#include "vexint/lebesgue.hpp"
#include "vexint/lpf.hpp"
#include "vexint/parallel.hpp"
#include "vexint/seqspaces.hpp"
#include "vexint/spectral.hpp"
#include "vexint/version.hpp"
