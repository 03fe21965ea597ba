#include "shieldot/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace shieldot {

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Whitespace-separated token reader over a whole file.
class Tokens {
public:
    Tokens(std::string text, std::string name) : text_(std::move(text)), name_(std::move(name)) {}

    std::string_view word() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of file");
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !space(text_[pos_])) ++pos_;
        return std::string_view(text_).substr(start, pos_ - start);
    }

    template <class T>
    T number() {
        const auto w = word();
        T v{};
        const auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || end != w.data() + w.size()) fail("bad number '" + std::string(w) + "'");
        return v;
    }

    bool at_end() {
        skip();
        return pos_ >= text_.size();
    }

    void expect_end() {
        if (!at_end()) fail("trailing data");
    }

    [[noreturn]] void fail(const std::string& what) const { throw Error(ErrorKind::Io, name_ + ": " + what); }

private:
    static bool space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
    void skip() {
        while (pos_ < text_.size() && space(text_[pos_])) ++pos_;
    }

    std::string text_;
    std::string name_;
    std::size_t pos_ = 0;
};

void checked(Tokens& t, const DiscreteMeasure& m) {
    try {
        m.validate();
    } catch (const Error& e) {
        t.fail(e.what());
    }
}

DiscreteMeasure parse_pts(Tokens& t) {
    const int dim = t.number<int>();
    const auto count = t.number<long long>();
    const auto scale = t.number<Mass>();
    if (dim < 1 || count < 1) t.fail("bad PTS header");
    std::vector<double> coords;
    std::vector<Mass> masses;
    coords.reserve(static_cast<std::size_t>(count * dim));
    masses.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
        for (int d = 0; d < dim; ++d) coords.push_back(t.number<double>());
        masses.push_back(t.number<Mass>());
    }
    t.expect_end();
    DiscreteMeasure m{PointCloud(dim, std::move(coords)), std::move(masses), scale, std::nullopt};
    checked(t, m);
    return m;
}

DiscreteMeasure parse_dgrid(Tokens& t) {
    const int dim = t.number<int>();
    if (dim < 1 || dim > 8) t.fail("bad DGRID header");
    std::vector<int> shape(static_cast<std::size_t>(dim));
    std::size_t count = 1;
    for (int& s : shape) {
        s = t.number<int>();
        if (s < 1) t.fail("bad grid extent");
        count *= static_cast<std::size_t>(s);
    }
    const auto scale = t.number<Mass>();
    std::vector<Mass> masses(count);
    for (Mass& w : masses) w = t.number<Mass>();
    t.expect_end();
    DiscreteMeasure m = make_grid_measure(shape, std::move(masses), scale);
    checked(t, m);
    return m;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

DiscreteMeasure read_pts(const std::filesystem::path& path) {
    Tokens t(slurp(path), path.string());
    if (t.word() != "PTS") t.fail("missing PTS header");
    return parse_pts(t);
}

DiscreteMeasure read_dgrid(const std::filesystem::path& path) {
    Tokens t(slurp(path), path.string());
    if (t.word() != "DGRID") t.fail("missing DGRID header");
    return parse_dgrid(t);
}

DiscreteMeasure read_measure(const std::filesystem::path& path) {
    Tokens t(slurp(path), path.string());
    const auto kind = t.word();
    if (kind == "PTS") return parse_pts(t);
    if (kind == "DGRID") return parse_dgrid(t);
    t.fail("unknown measure header '" + std::string(kind) + "'");
}

void write_pts(const std::filesystem::path& path, const DiscreteMeasure& m) {
    std::string s = "PTS " + std::to_string(m.dim()) + " " + std::to_string(m.size()) + " " + std::to_string(m.mass_scale) + "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (double c : m.points[i]) {
            s += format_double(c);
            s += ' ';
        }
        s += std::to_string(m.masses[i]);
        s += '\n';
    }
    write_text(path, s);
}

void write_dgrid(const std::filesystem::path& path, const DiscreteMeasure& m) {
    if (!m.grid_shape) throw Error(ErrorKind::InvalidInput, "measure has no grid shape");
    std::string s = "DGRID " + std::to_string(m.grid_shape->size());
    for (int e : *m.grid_shape) s += " " + std::to_string(e);
    s += " " + std::to_string(m.mass_scale) + "\n";
    const std::size_t row = static_cast<std::size_t>(m.grid_shape->back());
    for (std::size_t i = 0; i < m.size(); ++i) {
        s += std::to_string(m.masses[i]);
        s += (i + 1) % row == 0 ? '\n' : ' ';
    }
    write_text(path, s);
}

void write_measure(const std::filesystem::path& path, const DiscreteMeasure& m) {
    if (m.grid_shape) {
        write_dgrid(path, m);
    } else {
        write_pts(path, m);
    }
}

CouplingFile read_cpl(const std::filesystem::path& path) {
    Tokens t(slurp(path), path.string());
    if (t.word() != "CPL") t.fail("missing CPL header");
    const auto nx = t.number<long long>();
    const auto ny = t.number<long long>();
    const auto scale = t.number<Mass>();
    if (nx < 1 || ny < 1 || scale < 1) t.fail("bad CPL header");
    std::vector<SparseCoupling::Triplet> trip;
    while (!t.at_end()) {
        const auto i = t.number<Index>();
        const auto j = t.number<Index>();
        const auto w = t.number<Mass>();
        if (i < 0 || i >= nx || j < 0 || j >= ny || w < 0) t.fail("coupling entry out of range");
        trip.push_back({i, j, w});
    }
    return {SparseCoupling::from_triplets(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny), std::move(trip)), scale};
}

void write_cpl(const std::filesystem::path& path, const SparseCoupling& pi, Mass mass_scale) {
    std::string s = "CPL " + std::to_string(pi.nx()) + " " + std::to_string(pi.ny()) + " " + std::to_string(mass_scale) + "\n";
    for (std::size_t x = 0; x < pi.nx(); ++x) {
        for (const auto& e : pi.row(x)) {
            s += std::to_string(x) + " " + std::to_string(e.y) + " " + std::to_string(e.mass) + "\n";
        }
    }
    write_text(path, s);
}

}  // namespace shieldot
