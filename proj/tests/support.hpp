#pragma once

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "mfl/error.hpp"

#ifndef MFL_SOURCE_DIR
#define MFL_SOURCE_DIR "."
#endif

namespace support {

template <class F>
mfl::ErrorKind kind_of(F&& fn) {
    try {
        fn();
    } catch (const mfl::Error& e) {
        return e.kind();
    }
    FAIL("expected an mfl::Error");
    return mfl::ErrorKind::config;
}

inline std::filesystem::path source_dir() { return MFL_SOURCE_DIR; }

inline const nlohmann::json& reference() {
    static const nlohmann::json j = [] {
        std::ifstream in(source_dir() / "tests/golden/reference.json");
        REQUIRE_MESSAGE(in.good(), "missing tests/golden/reference.json");
        return nlohmann::json::parse(in);
    }();
    return j;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("mfl_test_" + name);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace support
