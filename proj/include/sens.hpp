#pragma once
// Umbrella header for the whole library.

#include "sens/analytics.hpp"
#include "sens/config.hpp"
#include "sens/fulfillment.hpp"
#include "sens/generator.hpp"
#include "sens/graph.hpp"
#include "sens/graph_io.hpp"
#include "sens/query.hpp"
#include "sens/rng.hpp"
#include "sens/schema.hpp"
#include "sens/term.hpp"
