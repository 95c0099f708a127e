#pragma once

#include <filesystem>
#include <string>

// Scratch directory under the test working directory, recreated empty on
// construction and removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& name) {
        path = std::filesystem::current_path() / ("scratch_" + name);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    std::string str(const std::string& child = "") const {
        return child.empty() ? path.string() : (path / child).string();
    }
};
