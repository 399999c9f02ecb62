#pragma once

#include "hoqmc/dyadic.hpp"
#include "hoqmc/error.hpp"
#include "hoqmc/generating_matrices.hpp"
#include "hoqmc/gf2.hpp"
#include "hoqmc/interlace.hpp"
#include "hoqmc/io.hpp"
#include "hoqmc/measures.hpp"
#include "hoqmc/niederreiter.hpp"
#include "hoqmc/poly2.hpp"
#include "hoqmc/quality.hpp"
#include "hoqmc/sequence.hpp"
#include "hoqmc/summation.hpp"
#include "hoqmc/walsh.hpp"
