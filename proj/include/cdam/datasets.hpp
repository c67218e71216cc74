#pragma once

// Locations of bundled and optional external data.

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "ingest.hpp"
#include "patterns.hpp"
#include "rng.hpp"
#include "surrogates.hpp"

#ifndef CDAM_DEFAULT_DATA_DIR
#define CDAM_DEFAULT_DATA_DIR "data"
#endif

namespace cdam {

// CDAM_DATA_DIR overrides the data directory chosen at build time.
inline std::string data_dir()
{
    if (const char* env = std::getenv("CDAM_DATA_DIR"); env && *env) return env;
    return CDAM_DEFAULT_DATA_DIR;
}

// FashionMNIST training images, looked up under <data>/fashion-mnist/ with
// or without the .gz-stripped "-idx3-ubyte" naming.
inline std::optional<std::string> find_fashion_mnist(const std::string& dir = data_dir())
{
    namespace fs = std::filesystem;
    for (const char* name : {"train-images-idx3-ubyte", "train-images.idx3-ubyte", "t10k-images-idx3-ubyte"}) {
        fs::path p = fs::path(dir) / "fashion-mnist" / name;
        if (fs::is_regular_file(p)) return p.string();
    }
    return std::nullopt;
}

struct RetrievalPool {
    PatternMatrix patterns;
    std::string source;
};

// First `count` FashionMNIST images when present, else seeded surrogates.
inline RetrievalPool retrieval_pool(std::size_t count, std::uint64_t seed, const std::string& dir = data_dir())
{
    if (auto path = find_fashion_mnist(dir)) {
        IdxImages img = load_idx(*path, {}, count);
        if (static_cast<std::size_t>(img.images.cols()) < count)
            fail(ErrorKind::length, *path + " holds fewer than " + std::to_string(count) + " images");
        return {PatternMatrix(std::move(img.images)), "fashion-mnist:" + *path};
    }
    return {surrogate_garments(count, derive_seed(seed, 11)), "surrogate-garments"};
}

}  // namespace cdam
