#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fgfrft/errors.hpp"

namespace fgfrft {

// ---------------------------------------------------------------------------
// PGM (P5, 8-bit)
// ---------------------------------------------------------------------------

struct PgmImage {
    Eigen::Index width = 0;
    Eigen::Index height = 0;
    std::vector<std::uint8_t> pixels; // row-major

    Eigen::MatrixXd to_matrix() const {
        Eigen::MatrixXd m(height, width);
        for (Eigen::Index r = 0; r < height; ++r)
            for (Eigen::Index c = 0; c < width; ++c)
                m(r, c) = static_cast<double>(pixels[static_cast<std::size_t>(r * width + c)]);
        return m;
    }

    static PgmImage from_matrix(const Eigen::MatrixXd& m) {
        PgmImage img;
        img.height = m.rows();
        img.width = m.cols();
        img.pixels.resize(static_cast<std::size_t>(m.size()));
        for (Eigen::Index r = 0; r < img.height; ++r)
            for (Eigen::Index c = 0; c < img.width; ++c) {
                const double v = std::round(std::min(255.0, std::max(0.0, m(r, c))));
                img.pixels[static_cast<std::size_t>(r * img.width + c)] = static_cast<std::uint8_t>(v);
            }
        return img;
    }
};

namespace detail {

// Whitespace/comment-aware integer scanner for the PGM header; reports the
// byte offset of any malformation.
struct PgmScanner {
    const std::string& data;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << "PGM parse error at byte " << pos << ": " << what;
        throw parse_error(msg.str());
    }

    void skip_space_and_comments() {
        while (pos < data.size()) {
            const char c = data[pos];
            if (c == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    long next_int() {
        skip_space_and_comments();
        if (pos >= data.size()) fail("unexpected end of header");
        if (!std::isdigit(static_cast<unsigned char>(data[pos]))) fail("expected a decimal integer");
        long v = 0;
        while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
            v = v * 10 + (data[pos] - '0');
            if (v > 1000000000L) fail("integer out of range");
            ++pos;
        }
        return v;
    }
};

} // namespace detail

inline PgmImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string data = buf.str();

    detail::PgmScanner sc{data};
    if (data.size() < 2 || data[0] != 'P' || data[1] != '5') {
        sc.pos = 0;
        sc.fail("missing P5 magic");
    }
    sc.pos = 2;
    const long width = sc.next_int();
    const long height = sc.next_int();
    const long maxval = sc.next_int();
    if (width < 1 || height < 1) sc.fail("non-positive dimensions");
    if (maxval != 255) sc.fail("only 8-bit (maxval 255) images are supported");
    if (sc.pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[sc.pos])))
        sc.fail("expected single whitespace before pixel data");
    ++sc.pos;

    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (data.size() - sc.pos < need) {
        sc.pos = data.size();
        sc.fail("truncated pixel data");
    }
    PgmImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(data.begin() + static_cast<std::ptrdiff_t>(sc.pos),
                      data.begin() + static_cast<std::ptrdiff_t>(sc.pos + need));
    return img;
}

inline void write_pgm(const std::string& path, const PgmImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw io_error("failed writing " + path);
}

// ---------------------------------------------------------------------------
// ASCII XYZ point clouds: one "x y z" triple per line
// ---------------------------------------------------------------------------

inline Eigen::MatrixXd read_xyz(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    std::vector<std::array<double, 3>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::array<double, 3> p{};
        if (!(ls >> p[0] >> p[1] >> p[2])) {
            std::ostringstream msg;
            msg << "XYZ parse error at line " << lineno << ": expected three floats";
            throw parse_error(msg.str());
        }
        std::string trailing;
        if (ls >> trailing) {
            std::ostringstream msg;
            msg << "XYZ parse error at line " << lineno << ": trailing content '" << trailing << "'";
            throw parse_error(msg.str());
        }
        rows.push_back(p);
    }
    Eigen::MatrixXd cloud(static_cast<Eigen::Index>(rows.size()), 3);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int a = 0; a < 3; ++a) cloud(static_cast<Eigen::Index>(i), a) = rows[i][static_cast<std::size_t>(a)];
    return cloud;
}

// Shortest decimal form that round-trips the exact double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

inline void write_xyz(const std::string& path, const Eigen::MatrixXd& cloud) {
    if (cloud.cols() != 3) throw shape_error("write_xyz: cloud must be Nx3");
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    for (Eigen::Index i = 0; i < cloud.rows(); ++i)
        out << format_double(cloud(i, 0)) << ' ' << format_double(cloud(i, 1)) << ' '
            << format_double(cloud(i, 2)) << '\n';
    if (!out) throw io_error("failed writing " + path);
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180, numeric payloads, fixed headers)
// ---------------------------------------------------------------------------

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : path_(path) {
        out_.open(path);
        if (!out_) throw io_error("cannot open " + path + " for writing");
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << "\r\n";
        if (!out_) throw io_error("failed writing " + path_);
    }

  private:
    std::string path_;
    std::ofstream out_;
};

inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Run manifest: flat key=value file, one per command invocation, carrying
// everything needed to replay the run.
// ---------------------------------------------------------------------------

struct RunManifest {
    std::string command;
    std::string version;
    std::uint64_t seed = 0;
    std::string timestamp;
    std::vector<std::pair<std::string, std::string>> flags;
    std::vector<std::string> outputs;
};

inline void write_manifest(const std::string& path, const RunManifest& m) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "command=" << m.command << '\n';
    out << "version=" << m.version << '\n';
    out << "seed=" << m.seed << '\n';
    out << "timestamp=" << m.timestamp << '\n';
    for (const auto& [k, v] : m.flags) out << "flag." << k << '=' << v << '\n';
    for (std::size_t i = 0; i < m.outputs.size(); ++i) out << "output." << i << '=' << m.outputs[i] << '\n';
    if (!out) throw io_error("failed writing " + path);
}

inline RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    RunManifest m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << "manifest parse error at line " << lineno << ": missing '='";
            throw parse_error(msg.str());
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "command") m.command = value;
        else if (key == "version") m.version = value;
        else if (key == "seed") m.seed = std::strtoull(value.c_str(), nullptr, 10);
        else if (key == "timestamp") m.timestamp = value;
        else if (key.rfind("flag.", 0) == 0) m.flags.emplace_back(key.substr(5), value);
        else if (key.rfind("output.", 0) == 0) m.outputs.push_back(value);
    }
    return m;
}

} // namespace fgfrft
