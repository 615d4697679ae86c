#pragma once

#include "kcohesion/analysis.hpp"
#include "kcohesion/complement.hpp"
#include "kcohesion/connectivity.hpp"
#include "kcohesion/decomposition.hpp"
#include "kcohesion/exact.hpp"
#include "kcohesion/generators.hpp"
#include "kcohesion/graph.hpp"
#include "kcohesion/graph_concept.hpp"
#include "kcohesion/io.hpp"
#include "kcohesion/kcomponents.hpp"
#include "kcohesion/version.hpp"
