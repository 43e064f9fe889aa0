#include "lack/error.hpp"
#include "lack/mvdata.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lack {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<char, 4> kMagic{'M', 'V', 'M', '1'};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void put_u64_le(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64_le(std::istream& in, const fs::path& path) {
    std::array<unsigned char, 8> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
        throw IoError("'" + path.string() + "': truncated binary matrix");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
        h ^= (word >> (8 * i)) & 0xFF;
        h *= kFnvPrime;
    }
}

}  // namespace

MatrixFormat parse_matrix_format(const std::string& s) {
    if (s == "csv") return MatrixFormat::Csv;
    if (s == "f64bin") return MatrixFormat::F64Bin;
    throw ValidationError("unknown matrix format '" + s + "' (expected csv or f64bin)");
}

std::string to_string(MatrixFormat f) {
    return f == MatrixFormat::Csv ? "csv" : "f64bin";
}

Matrix read_csv_matrix(const fs::path& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest = trim(line);
        if (rest.empty()) continue;
        std::vector<double> row;
        std::size_t col = 0;
        for (;;) {
            const auto comma = rest.find(',');
            const std::string_view cell = trim(rest.substr(0, comma));
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size())
                throw ValidationError("'" + path.string() + "': bad number '" + std::string(cell) +
                                      "' at line " + std::to_string(line_no) + ", column " +
                                      std::to_string(col + 1));
            if (!std::isfinite(v))
                throw ValidationError("'" + path.string() + "': non-finite entry at line " +
                                      std::to_string(line_no) + ", column " +
                                      std::to_string(col + 1));
            row.push_back(v);
            ++col;
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ValidationError("'" + path.string() + "': line " + std::to_string(line_no) +
                                  " has " + std::to_string(row.size()) + " columns, expected " +
                                  std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ValidationError("'" + path.string() + "': empty matrix");

    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    return m;
}

void write_csv_matrix(const fs::path& path, const Matrix& m) {
    auto out = open_out(path);
    std::array<char, 32> buf{};
    std::string line;
    for (Index r = 0; r < m.rows(); ++r) {
        line.clear();
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) line.push_back(',');
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), m(r, c));
            line.append(buf.data(), res.ptr);
        }
        line.push_back('\n');
        out << line;
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Matrix read_f64bin_matrix(const fs::path& path) {
    auto in = open_in(path, std::ios::binary);
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic)
        throw ValidationError("'" + path.string() + "': missing MVM1 magic");
    const std::uint64_t rows = get_u64_le(in, path);
    const std::uint64_t cols = get_u64_le(in, path);
    if (rows == 0 || cols == 0)
        throw ValidationError("'" + path.string() + "': zero-sized matrix");
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    double* data = m.data();  // column-major, matching the file layout
    for (std::uint64_t i = 0; i < rows * cols; ++i) {
        const double v = std::bit_cast<double>(get_u64_le(in, path));
        if (!std::isfinite(v))
            throw ValidationError("'" + path.string() + "': non-finite entry at row " +
                                  std::to_string(i % rows + 1) + ", column " +
                                  std::to_string(i / rows + 1));
        data[i] = v;
    }
    return m;
}

void write_f64bin_matrix(const fs::path& path, const Matrix& m) {
    auto out = open_out(path, std::ios::binary);
    out.write(kMagic.data(), kMagic.size());
    put_u64_le(out, static_cast<std::uint64_t>(m.rows()));
    put_u64_le(out, static_cast<std::uint64_t>(m.cols()));
    const double* data = m.data();
    for (Index i = 0; i < m.size(); ++i) put_u64_le(out, std::bit_cast<std::uint64_t>(data[i]));
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Matrix read_matrix(const fs::path& path, MatrixFormat format) {
    return format == MatrixFormat::Csv ? read_csv_matrix(path) : read_f64bin_matrix(path);
}

void write_matrix(const fs::path& path, const Matrix& m, MatrixFormat format) {
    if (format == MatrixFormat::Csv)
        write_csv_matrix(path, m);
    else
        write_f64bin_matrix(path, m);
}

std::vector<std::string> read_label_tokens(const fs::path& path) {
    auto in = open_in(path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (!t.empty()) tokens.emplace_back(t);
    }
    return tokens;
}

void write_label_tokens(const fs::path& path, std::span<const std::string> tokens) {
    auto out = open_out(path);
    for (const auto& t : tokens) out << t << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Manifest read_manifest(const fs::path& manifest_path) {
    auto in = open_in(manifest_path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("'" + manifest_path.string() + "': " + e.what());
    }
    const fs::path base = manifest_path.parent_path();
    Manifest m;
    try {
        if (!doc.contains("views") || !doc["views"].is_array() || doc["views"].empty())
            throw ValidationError("'" + manifest_path.string() + "': no views listed");
        std::size_t p = 0;
        for (const auto& v : doc["views"]) {
            ManifestView mv;
            mv.name = v.value("name", "view" + std::to_string(p + 1));
            mv.path = base / v.at("path").get<std::string>();
            mv.format = parse_matrix_format(v.value("format", std::string("csv")));
            m.views.push_back(std::move(mv));
            ++p;
        }
        if (doc.contains("labels")) {
            const auto& l = doc["labels"];
            m.labels = base / (l.is_string() ? l.get<std::string>() : l.at("path").get<std::string>());
        }
        if (doc.contains("provenance")) m.provenance_json = doc["provenance"].dump();
    } catch (const json::exception& e) {
        throw ValidationError("'" + manifest_path.string() + "': " + e.what());
    }
    return m;
}

MultiViewDataset load_dataset(const fs::path& manifest_path) {
    const Manifest manifest = read_manifest(manifest_path);
    std::vector<Matrix> views;
    std::vector<std::string> names;
    for (const auto& v : manifest.views) {
        if (!fs::exists(v.path))
            throw IoError("view '" + v.name + "': missing file '" + v.path.string() + "'");
        try {
            views.push_back(read_matrix(v.path, v.format));
        } catch (const ValidationError& e) {
            throw ValidationError("view '" + v.name + "': " + e.what());
        }
        names.push_back(v.name);
    }
    return MultiViewDataset(std::move(views), std::move(names));
}

LabelEncoding load_labels(const fs::path& manifest_path) {
    const Manifest manifest = read_manifest(manifest_path);
    if (!manifest.labels)
        throw ValidationError("'" + manifest_path.string() + "': no labels entry");
    if (!fs::exists(*manifest.labels))
        throw IoError("missing label file '" + manifest.labels->string() + "'");
    const auto tokens = read_label_tokens(*manifest.labels);
    return encode_labels(tokens);
}

fs::path save_dataset(const fs::path& dir, const MultiViewDataset& ds,
                      std::span<const std::string> label_tokens, const SaveOptions& opts) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

    const std::string ext = opts.format == MatrixFormat::Csv ? ".csv" : ".bin";
    json doc;
    doc["views"] = json::array();
    for (std::size_t p = 0; p < ds.num_views(); ++p) {
        const std::string file = "view" + std::to_string(p + 1) + ext;
        write_matrix(dir / file, ds.view(p), opts.format);
        doc["views"].push_back({{"name", ds.name(p)}, {"path", file}, {"format", to_string(opts.format)}});
    }
    if (!label_tokens.empty()) {
        write_label_tokens(dir / "labels.csv", label_tokens);
        doc["labels"] = {{"path", "labels.csv"}, {"format", "csv"}};
    }
    if (!opts.provenance_json.empty()) doc["provenance"] = json::parse(opts.provenance_json);

    const fs::path manifest = dir / opts.manifest_name;
    auto out = open_out(manifest);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + manifest.string() + "'");
    return manifest;
}

std::uint64_t content_hash(const MultiViewDataset& ds) {
    std::uint64_t h = kFnvOffset;
    fnv_mix(h, ds.num_views());
    for (const auto& v : ds.views()) {
        fnv_mix(h, static_cast<std::uint64_t>(v.rows()));
        fnv_mix(h, static_cast<std::uint64_t>(v.cols()));
        for (Index i = 0; i < v.size(); ++i) fnv_mix(h, std::bit_cast<std::uint64_t>(v.data()[i]));
    }
    return h;
}

std::uint64_t content_hash(std::span<const std::string> tokens) {
    std::uint64_t h = kFnvOffset;
    for (const auto& t : tokens) {
        for (unsigned char ch : t) {
            h ^= ch;
            h *= kFnvPrime;
        }
        h ^= '\n';
        h *= kFnvPrime;
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    std::ostringstream s;
    s << std::hex;
    s.width(16);
    s.fill('0');
    s << h;
    return s.str();
}

}  // namespace lack
