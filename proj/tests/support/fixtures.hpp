#pragma once

#include <filesystem>
#include <string>

#include "camplan/catalog.hpp"
#include "camplan/model.hpp"
#include "camplan/profiles.hpp"

#ifndef CAMPLAN_TEST_DATA_DIR
#error "CAMPLAN_TEST_DATA_DIR must point at the data/ directory"
#endif

namespace camplan::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(CAMPLAN_TEST_DATA_DIR) / name;
}

inline const Catalog& experiment_catalog() {
  static const Catalog catalog = load_catalog_file(data_path("catalog_experiment.json"));
  return catalog;
}

inline const Catalog& ec2_catalog() {
  static const Catalog catalog = load_catalog_file(data_path("catalog_ec2.json"));
  return catalog;
}

inline const ProfileStore& bundled_profiles() {
  static const ProfileStore store = load_profiles_file(data_path("profiles_640x480.json"));
  return store;
}

inline Workload scenario(int n) {
  return load_workload_file(data_path("scenario" + std::to_string(n) + ".json"));
}

inline constexpr FrameSize kVga{640, 480};

inline const Profile& profile(const std::string& program, Device device) {
  const Profile* p = bundled_profiles().find(program, kVga, device);
  if (p == nullptr) throw std::runtime_error("missing fixture profile " + program);
  return *p;
}

}  // namespace camplan::testing
