#pragma once

#include "iset/graph.hpp"
#include "iset/rng.hpp"

namespace iset::gen {

// Fixed fixtures.
Graph path(int n);
Graph cycle(int n);
Graph complete(int n);
Graph star(int leaves); // vertex 0 is the center
Graph empty(int n);

// Random instances; deterministic for a given generator state.
Graph erdos_renyi(int n, double p, Rng& rng);
Graph random_unit_disk(int n, double radius, double box_side, Rng& rng);
// Rejection-samples until the disk graph is connected.
Graph random_connected_unit_disk(int n, double radius, double box_side, Rng& rng);
Graph lattice_unit_disk(int rows, int cols, double spacing, double radius);

} // namespace iset::gen
