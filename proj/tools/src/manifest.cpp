#include "manifest.hpp"

#include <ostream>

#include "files.hpp"

namespace edhg::cli {

RunManifest::RunManifest(std::string command) : command_(std::move(command)) {}

void RunManifest::add_input(const std::string& role, const std::filesystem::path& path) {
  inputs_.push_back({{"role", role}, {"path", path.string()}, {"sha256", sha256_file(path)}});
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs_.push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
}

RunManifest::Stage::Stage(RunManifest& m, std::string name)
    : manifest_(m), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

RunManifest::Stage::~Stage() {
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
  manifest_.stages_.push_back({{"stage", name_}, {"seconds", elapsed.count()}});
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "edhg";
  j["command"] = command_;
  j["config"] = config_;
  j["seed"] = seed_ ? nlohmann::ordered_json(*seed_) : nlohmann::ordered_json(nullptr);
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["stages"] = stages_;
  return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
  const auto text = to_json().dump(2);
  write_atomically(path, [&](std::ostream& out) { out << text << '\n'; });
}

}  // namespace edhg::cli
