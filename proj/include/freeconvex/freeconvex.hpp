#pragma once

// Umbrella header.

#include "freeconvex/boundary.hpp"
#include "freeconvex/calculus.hpp"
#include "freeconvex/certificate.hpp"
#include "freeconvex/classify.hpp"
#include "freeconvex/eval.hpp"
#include "freeconvex/json_io.hpp"
#include "freeconvex/ldl.hpp"
#include "freeconvex/matrix.hpp"
#include "freeconvex/middle.hpp"
#include "freeconvex/parse.hpp"
#include "freeconvex/poly.hpp"
#include "freeconvex/random.hpp"
#include "freeconvex/rational.hpp"
#include "freeconvex/sos.hpp"
#include "freeconvex/spectra.hpp"
#include "freeconvex/symtuple.hpp"
#include "freeconvex/tangent.hpp"
#include "freeconvex/word.hpp"
