#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sigid/error.hpp"

namespace sigid {

// Row-major grayscale raster; 0 is darkest ink, 255 is blank paper.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    bool empty() const { return width <= 0 || height <= 0; }
    std::size_t size() const { return pixels.size(); }

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }

    static GrayImage filled(int w, int h, std::uint8_t value) {
        GrayImage img;
        img.width = w;
        img.height = h;
        img.pixels.assign(static_cast<std::size_t>(w) * h, value);
        return img;
    }
};

// Row-major ink mask; 1 is an ink pixel.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> ink;

    bool empty() const { return width <= 0 || height <= 0; }

    std::uint8_t at(int x, int y) const {
        return ink[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return ink[static_cast<std::size_t>(y) * width + x];
    }

    std::size_t ink_count() const;

    static BinaryImage blank(int w, int h) {
        BinaryImage img;
        img.width = w;
        img.height = h;
        img.ink.assign(static_cast<std::size_t>(w) * h, 0);
        return img;
    }
};

bool operator==(const GrayImage& a, const GrayImage& b);
bool operator==(const BinaryImage& a, const BinaryImage& b);

// Binary PGM (P5), maxval <= 255. Values are rescaled to [0,255] when the
// file's maxval is smaller.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);
// Ink renders black on white paper.
void write_pgm(const BinaryImage& img, const std::filesystem::path& path);

}  // namespace sigid
