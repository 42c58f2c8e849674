#pragma once

#include <string>
#include <vector>

#include "iic/graph.hpp"
#include "iic/seeds.hpp"

namespace iic {

/// Built-in study graphs. Each fixture ships with its canonical seed
/// specification (possibly empty).
struct Fixture {
  std::string name;
  MixedGraph graph;
  SeedSpec seeds;
  std::string note;
};

Fixture fixture(const std::string& name);
std::vector<std::string> fixture_names();

}  // namespace iic
