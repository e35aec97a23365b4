#include "isc/manifest.hpp"

#include <array>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <openssl/evp.h>

namespace isc {

namespace {

struct DigestContext {
    DigestContext()
        : ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free)
    {
        if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("sha256: cannot initialise digest");
    }

    void update(std::string_view data)
    {
        if (EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1)
            throw std::runtime_error("sha256: update failed");
    }

    std::string hex()
    {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
            throw std::runtime_error("sha256: finalisation failed");
        std::string out;
        out.reserve(2 * len);
        for (unsigned int i = 0; i < len; ++i)
            out += fmt::format("{:02x}", md[i]);
        return out;
    }

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx;
};

}  // namespace

std::string sha256_hex(std::string_view data)
{
    DigestContext d;
    d.update(data);
    return d.hex();
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error(fmt::format("sha256: cannot open '{}'", path.string()));
    DigestContext d;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        d.update({buf.data(), static_cast<std::size_t>(in.gcount())});
    }
    return d.hex();
}

void RunManifest::add(std::string name, std::string_view contents)
{
    files.push_back({std::move(name), sha256_hex(contents), contents.size()});
}

void write_manifest(std::ostream& os, const RunManifest& m)
{
    os << "# isc_sim run manifest\n";
    os << "# digest: SHA-256 over the raw file bytes, lower-case hex\n";
    fmt::print(os, "config: {}\n", m.config_path.empty() ? "(built-in defaults)" : m.config_path);
    fmt::print(os, "output: {}\n", m.output_dir);
    fmt::print(os, "scenario: {}\n", m.scenario);
    if (m.sweep_parameter.empty()) {
        os << "sweep: none\n";
    } else {
        fmt::print(os, "sweep: {} =", m.sweep_parameter);
        for (std::size_t i = 0; i < m.sweep_values.size(); ++i)
            fmt::print(os, "{}{}", i == 0 ? " " : ",", m.sweep_values[i]);
        os << '\n';
    }
    fmt::print(os, "files: {}\n", m.files.size());
    for (const auto& f : m.files)
        fmt::print(os, "{}  {:>10}  {}\n", f.sha256, f.bytes, f.name);
}

}  // namespace isc
