#pragma once

#include <string>

#include "sap/core.hpp"

namespace sap {

// Canonical instance file:
//   {"capacities":[u_0,...,u_{m-1}],"tasks":[{"id":"t1","s":0,"t":2,"d":3,"w":5},...]}
// Placement file:
//   {"heights":{"t1":0,...}}
// Both integer-only, UTF-8, keys exactly as shown.
std::string instance_to_json(const SapInstance& instance);
SapInstance instance_from_json(const std::string& text);

std::string placement_to_json(const Placement& placement);
Placement placement_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace sap
