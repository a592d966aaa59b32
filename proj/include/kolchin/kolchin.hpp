#pragma once

#include "kolchin/boundary.hpp"
#include "kolchin/errors.hpp"
#include "kolchin/essential.hpp"
#include "kolchin/filtered_map.hpp"
#include "kolchin/graph.hpp"
#include "kolchin/homology.hpp"
#include "kolchin/index_bound.hpp"
#include "kolchin/interesting_lifts.hpp"
#include "kolchin/lift.hpp"
#include "kolchin/map_group.hpp"
#include "kolchin/oracle.hpp"
#include "kolchin/word.hpp"
