#pragma once

#include "cayley.hpp"
#include "code.hpp"
#include "counting.hpp"
#include "csp.hpp"
#include "error.hpp"
#include "field.hpp"
#include "graphs.hpp"
#include "hypergraphs.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "sparsify.hpp"
