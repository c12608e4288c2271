#pragma once

#include "skewlabs/seqcore.hpp"
#include "skewlabs/incremental.hpp"
#include "skewlabs/solvers.hpp"
#include "skewlabs/oracle.hpp"
#include "skewlabs/seqio.hpp"
