#pragma once

#include "io.hpp"
#include "oracle.hpp"
#include "scheduling.hpp"
#include "semantics.hpp"
#include "solver.hpp"
#include "transform.hpp"
#include "tree.hpp"
