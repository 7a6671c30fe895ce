#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edhg {

enum class Category : std::uint8_t { Academic, Residential, Administration, Auxiliary };

enum class Functionality : std::uint8_t {
  Residence,
  Recreation,
  Dining,
  Exercise,
  LibraryLab,
  Classrooms,
  Others,
};

inline constexpr int kCategoryCount = 4;
inline constexpr int kFunctionalityCount = 7;

inline constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "Academic", "Residential", "Administration", "Auxiliary"};
inline constexpr std::array<std::string_view, kFunctionalityCount> kFunctionalityNames = {
    "Residence", "Recreation", "Dining", "Exercise", "Library/Lab", "Classrooms", "Others"};

std::optional<Category> parse_category(std::string_view name);
std::optional<Functionality> parse_functionality(std::string_view name);
inline std::string_view to_string(Category c) { return kCategoryNames[static_cast<int>(c)]; }
inline std::string_view to_string(Functionality f) {
  return kFunctionalityNames[static_cast<int>(f)];
}

struct VenueProfile {
  std::string poi_id;
  Category category = Category::Academic;
  // Sorted, unique, non-empty.
  std::vector<Functionality> functionalities;
};

}  // namespace edhg
