#include "eibounds/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <vector>

namespace eib {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view s, std::size_t line, const char* column) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw validation_error("line " + std::to_string(line) + ", column " + column +
                               ": cannot parse number from '" + std::string(s) + "'");
    }
    return v;
}

const std::array<std::string_view, 4> kBaseHeader = {"id", "n", "x", "t"};
const std::array<std::string_view, 6> kTruthHeader = {"id",  "n",      "x",
                                                      "t",   "beta_b", "beta_w"};

bool matches_header(const std::vector<std::string_view>& fields, bool& with_truth) {
    if (fields.size() == kBaseHeader.size()) {
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (fields[i] != kBaseHeader[i]) return false;
        with_truth = false;
        return true;
    }
    if (fields.size() == kTruthHeader.size()) {
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (fields[i] != kTruthHeader[i]) return false;
        with_truth = true;
        return true;
    }
    return false;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

Dataset load_csv(std::istream& in, const std::string& name,
                 const ValidationOptions& opts) {
    Dataset ds;
    ds.name = name;
    bool header_seen = false;
    bool with_truth = false;
    std::size_t line_no = 0;  // physical line, as an editor would show it
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        auto fields = split_fields(sv);
        if (!header_seen) {
            if (!matches_header(fields, with_truth)) {
                throw validation_error(
                    "dataset '" + name +
                    "': first data line must be the header 'id,n,x,t' or "
                    "'id,n,x,t,beta_b,beta_w', got '" +
                    std::string(sv) + "'");
            }
            header_seen = true;
            continue;
        }
        bool dummy = false;
        if (matches_header(fields, dummy)) {
            throw validation_error("dataset '" + name + "': duplicate header at line " +
                                   std::to_string(line_no));
        }
        std::size_t expected = with_truth ? 6 : 4;
        if (fields.size() != expected) {
            throw validation_error("line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(expected) + " fields, got " +
                                   std::to_string(fields.size()));
        }
        Precinct p;
        if (fields[0].empty()) {
            throw validation_error("line " + std::to_string(line_no) + ": empty id");
        }
        p.id = std::string(fields[0]);
        p.n = parse_double(fields[1], line_no, "n");
        p.x = parse_double(fields[2], line_no, "x");
        p.t = parse_double(fields[3], line_no, "t");
        if (with_truth) {
            p.beta_b = parse_double(fields[4], line_no, "beta_b");
            p.beta_w = parse_double(fields[5], line_no, "beta_w");
        }
        ds.precincts.push_back(std::move(p));
    }
    if (!header_seen) {
        throw validation_error("dataset '" + name + "': empty file");
    }
    ds.has_ground_truth = with_truth;
    validate_dataset(ds, opts);
    return ds;
}

Dataset load_csv_file(const std::filesystem::path& path,
                      const ValidationOptions& opts) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open '" + path.string() + "' for reading");
    }
    return load_csv(in, path.stem().string(), opts);
}

void write_csv(const Dataset& ds, std::ostream& out) {
    if (ds.has_ground_truth) {
        out << "id,n,x,t,beta_b,beta_w\n";
    } else {
        out << "id,n,x,t\n";
    }
    for (const Precinct& p : ds.precincts) {
        out << p.id << ',' << format_double(p.n) << ',' << format_double(p.x) << ','
            << format_double(p.t);
        if (ds.has_ground_truth) {
            out << ',' << format_double(p.beta_b.value_or(0.0)) << ','
                << format_double(p.beta_w.value_or(0.0));
        }
        out << '\n';
    }
}

void write_csv_file(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw io_error("cannot open '" + path.string() + "' for writing");
    }
    write_csv(ds, out);
    out.flush();
    if (!out) {
        throw io_error("error writing '" + path.string() + "'");
    }
}

}  // namespace eib
