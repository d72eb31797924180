#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rolin/dataset.hpp"

namespace rolin {

enum class ScenarioKind { Case, Example, CsvFile };

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::Case;
    int id = 1;          // 1..16 for cases, 1..12 for examples
    std::size_t n = 100;
    std::size_t p = 5;
    std::size_t q = 5;
    std::uint64_t seed = 0;
    std::string path;    // CsvFile only

    // Cases 1-12 and all examples use p = q = 5, cases 13-16 use p = q = 10.
    static ScenarioSpec make_case(int id, std::size_t n, std::uint64_t seed);
    static ScenarioSpec make_example(int id, std::size_t n, std::uint64_t seed);
    static ScenarioSpec csv(std::string path);

    std::string name() const;
};

struct ScenarioInfo {
    ScenarioKind kind;
    int id;
    std::string name;
    std::string description;
    bool null_hypothesis;
};

// All 16 cases followed by the 12 examples.
const std::vector<ScenarioInfo>& list_scenarios();

// Throws ArgumentError for unknown ids.
const ScenarioInfo& scenario_info(ScenarioKind kind, int id);

// Draws n rows from the named model. Each Y coordinate k is generated from
// X coordinate k mod p with fresh noise, so the scalar recipe is applied
// independently per coordinate. Reproducible from spec.seed.
Dataset generate(const ScenarioSpec& spec);

}  // namespace rolin
