#include "sigid/image.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sigid/kernels.hpp"

namespace sigid {

std::size_t BinaryImage::ink_count() const { return kernels::count_nonzero(ink); }

bool operator==(const GrayImage& a, const GrayImage& b) {
    return a.width == b.width && a.height == b.height && a.pixels == b.pixels;
}

bool operator==(const BinaryImage& a, const BinaryImage& b) {
    return a.width == b.width && a.height == b.height && a.ink == b.ink;
}

namespace {

// Reads the next whitespace/comment-delimited token of a PNM header.
bool next_header_token(std::istream& in, std::string& tok) {
    tok.clear();
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (!std::isspace(c)) break;
    }
    if (c == EOF) return false;
    tok.push_back(static_cast<char>(c));
    while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(c));
    return true;
}

long parse_header_int(const std::string& tok, const std::filesystem::path& path) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        raise(Errc::parse_error, path.string() + ": bad PGM header token '" + tok + "'");
    }
}

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(Errc::io_failure, "cannot open " + tmp + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) raise(Errc::io_failure, "short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) raise(Errc::io_failure, "rename " + tmp + " -> " + path.string() + ": " + ec.message());
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_failure, "cannot open " + path.string());

    std::string tok;
    if (!next_header_token(in, tok) || tok != "P5")
        raise(Errc::parse_error, path.string() + ": not a binary PGM (P5) file");

    long fields[3];
    for (long& f : fields) {
        if (!next_header_token(in, tok))
            raise(Errc::parse_error, path.string() + ": truncated PGM header");
        f = parse_header_int(tok, path);
    }
    const long w = fields[0], h = fields[1], maxval = fields[2];
    if (w <= 0 || h <= 0) raise(Errc::parse_error, path.string() + ": bad PGM dimensions");
    if (maxval <= 0 || maxval > 255)
        raise(Errc::parse_error, path.string() + ": unsupported PGM maxval " + std::to_string(maxval));

    GrayImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.pixels.size())
        raise(Errc::parse_error, path.string() + ": truncated PGM pixel data");

    if (maxval != 255) {
        for (auto& p : img.pixels)
            p = static_cast<std::uint8_t>((p * 255L + maxval / 2) / maxval);
    }
    return img;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    if (img.empty()) raise(Errc::empty_image, "write_pgm: empty image");
    std::string bytes;
    char header[64];
    std::snprintf(header, sizeof header, "P5\n%d %d\n255\n", img.width, img.height);
    bytes.append(header);
    bytes.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    atomic_write(path, bytes);
}

void write_pgm(const BinaryImage& img, const std::filesystem::path& path) {
    if (img.empty()) raise(Errc::empty_image, "write_pgm: empty image");
    GrayImage g = GrayImage::filled(img.width, img.height, 255);
    for (std::size_t i = 0; i < img.ink.size(); ++i)
        if (img.ink[i]) g.pixels[i] = 0;
    write_pgm(g, path);
}

}  // namespace sigid
