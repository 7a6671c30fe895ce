#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace edhg::cli {

// Provenance record written next to a command's outputs: configuration,
// seed, digests of every input and output, and wall time per stage.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  nlohmann::ordered_json& config() { return config_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_input(const std::string& role, const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);

  // Times the enclosing scope as one named stage.
  class Stage {
   public:
    Stage(RunManifest& m, std::string name);
    ~Stage();
    Stage(const Stage&) = delete;
    Stage& operator=(const Stage&) = delete;

   private:
    RunManifest& manifest_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
  };

  nlohmann::ordered_json to_json() const;
  // Atomic write.
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed_;
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json stages_ = nlohmann::ordered_json::array();
};

}  // namespace edhg::cli
