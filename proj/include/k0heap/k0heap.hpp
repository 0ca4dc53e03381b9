#pragma once

#include "k0heap/category.hpp"
#include "k0heap/dsl.hpp"
#include "k0heap/expr.hpp"
#include "k0heap/heap.hpp"
#include "k0heap/instances.hpp"
#include "k0heap/label.hpp"
#include "k0heap/lattice.hpp"
#include "k0heap/presentation.hpp"
#include "k0heap/report.hpp"
