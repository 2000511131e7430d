#include "noisectl/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "NCT1 serialization assumes a little-endian host");

namespace noisectl {

namespace fs = std::filesystem;

static void put_u32(std::ostream& os, uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
static void put_u64(std::ostream& os, uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
static uint32_t get_u32(std::istream& is) {
    uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
static uint64_t get_u64(std::istream& is) {
    uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

void write_nct(std::ostream& os, const Tensor& t) {
    os.write("NCT1", 4);
    put_u32(os, static_cast<uint32_t>(t.rank()));
    for (int64_t d : t.dims()) put_u64(os, static_cast<uint64_t>(d));
    os.write(reinterpret_cast<const char*>(t.data()),
             static_cast<std::streamsize>(t.numel() * sizeof(double)));
    if (!os) throw std::runtime_error("NCT1 write failed");
}

Tensor read_nct(std::istream& is) {
    char magic[4] = {};
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "NCT1", 4) != 0)
        throw std::runtime_error("NCT1 read: bad magic");
    uint32_t rank = get_u32(is);
    if (rank == 0 || rank > 16)
        throw std::runtime_error("NCT1 read: implausible rank");
    std::vector<int64_t> dims(rank);
    int64_t n = 1;
    for (auto& d : dims) {
        d = static_cast<int64_t>(get_u64(is));
        if (d <= 0) throw std::runtime_error("NCT1 read: bad extent");
        n *= d;
    }
    std::vector<double> data(static_cast<size_t>(n));
    is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw std::runtime_error("NCT1 read: truncated payload");
    return Tensor(std::move(dims), std::move(data));
}

void save_nct(const fs::path& path, const Tensor& t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path.string());
    write_nct(os, t);
}

Tensor load_nct(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for read: " + path.string());
    return read_nct(is);
}

void write_tagged(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& header,
                  const std::vector<const Tensor*>& tensors) {
    for (size_t i = 0; i < header.size(); ++i)
        os << (i ? " " : "") << header[i].first << "=" << header[i].second;
    os << "\n";
    for (const Tensor* t : tensors) write_nct(os, *t);
}

std::vector<std::pair<std::string, std::string>> read_tagged_header(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("tagged read: missing header line");
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("tagged read: malformed header token '" + tok + "'");
        out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
    return out;
}

void write_ppm(const fs::path& path, const Tensor& image) {
    if (image.rank() != 3)
        throw std::invalid_argument("write_ppm: expected [C,H,W], got " + image.shape_str());
    int64_t c = image.dim(0), h = image.dim(1), w = image.dim(2);
    if (c != 1 && c != 3)
        throw std::invalid_argument("write_ppm: channels must be 1 or 3");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path.string());
    os << "P6\n" << w << " " << h << "\n255\n";
    const double* p = image.data();
    std::vector<unsigned char> row(static_cast<size_t>(w) * 3);
    for (int64_t y = 0; y < h; ++y) {
        for (int64_t x = 0; x < w; ++x) {
            for (int64_t ch = 0; ch < 3; ++ch) {
                double v = p[(c == 1 ? 0 : ch) * h * w + y * w + x];
                v = std::clamp(v, 0.0, 1.0);
                row[static_cast<size_t>(x * 3 + ch)] =
                    static_cast<unsigned char>(v * 255.0 + 0.5);
            }
        }
        os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!os) throw std::runtime_error("PPM write failed: " + path.string());
}

uint64_t fnv1a_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for hash: " + path.string());
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof(buf));
        std::streamsize got = is.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

void write_manifest(const fs::path& dir) {
    std::vector<std::string> rels;
    for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) continue;
        fs::path rel = fs::relative(it->path(), dir);
        if (rel == "manifest.txt") continue;
        rels.push_back(rel.generic_string());
    }
    std::sort(rels.begin(), rels.end());
    std::ofstream os(dir / "manifest.txt");
    if (!os) throw std::runtime_error("cannot write manifest in " + dir.string());
    os << std::hex;
    for (const auto& rel : rels) {
        uint64_t h = fnv1a_file(dir / rel);
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        os << buf << "  " << rel << "\n";
    }
}

std::vector<std::pair<std::string, std::string>> read_manifest(const fs::path& dir) {
    std::ifstream is(dir / "manifest.txt");
    if (!is) throw std::runtime_error("missing manifest in " + dir.string());
    std::vector<std::pair<std::string, std::string>> out;
    std::string hash, rel;
    while (is >> hash >> rel) out.emplace_back(hash, rel);
    return out;
}

}  // namespace noisectl
