#include "fischer/pts_io.hpp"

#include <fstream>
#include <sstream>

namespace fischer {

namespace {

bool parse_index(const std::string& token, Point& out) {
    if (token.empty() || token.size() > 9) return false;
    Point v = 0;
    for (char c : token) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + static_cast<Point>(c - '0');
    }
    out = v;
    return true;
}

}  // namespace

std::string write_pts(const TripleSystem& s, const std::vector<std::string>& comments) {
    std::string out = "pts v1 " + std::to_string(s.n_points()) + "\n";
    for (const auto& c : comments) {
        if (c.find('\n') != std::string::npos)
            throw std::invalid_argument("comment must be a single line");
        out += "# " + c + "\n";
    }
    for (const auto& l : s.lines())
        out += std::to_string(l[0]) + " " + std::to_string(l[1]) + " " +
               std::to_string(l[2]) + "\n";
    return out;
}

PtsFile read_pts_full(const std::string& text) {
    if (text.empty() || text.back() != '\n')
        throw PtsParseError("missing trailing newline");

    std::vector<std::string> rows;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i)
        if (text[i] == '\n') {
            rows.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    if (rows.empty()) throw PtsParseError("empty input");

    std::istringstream header(rows[0]);
    std::string magic, version;
    long long n = -1;
    header >> magic >> version >> n;
    if (magic != "pts" || version != "v1" || n < 0 || !header.eof() || header.fail())
        throw PtsParseError("bad header: " + rows[0]);

    std::vector<std::string> comments;
    std::vector<std::array<Point, 3>> lines;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string& row = rows[r];
        if (!row.empty() && row[0] == '#') {
            comments.push_back(row.size() > 1 && row[1] == ' ' ? row.substr(2)
                                                               : row.substr(1));
            continue;
        }
        std::vector<std::string> tokens;
        std::size_t pos = 0;
        while (pos <= row.size()) {
            const std::size_t space = row.find(' ', pos);
            tokens.push_back(space == std::string::npos
                                 ? row.substr(pos)
                                 : row.substr(pos, space - pos));
            if (space == std::string::npos) break;
            pos = space + 1;
        }
        std::array<Point, 3> triple{};
        if (tokens.size() != 3 || !parse_index(tokens[0], triple[0]) ||
            !parse_index(tokens[1], triple[1]) || !parse_index(tokens[2], triple[2]))
            throw PtsParseError("line " + std::to_string(r + 1) +
                                ": expected exactly three indices, got '" + row + "'");
        if (!(triple[0] < triple[1] && triple[1] < triple[2]))
            throw PtsParseError("line " + std::to_string(r + 1) +
                                ": indices must be strictly ascending");
        if (triple[2] >= n)
            throw PtsParseError("line " + std::to_string(r + 1) + ": index " +
                                std::to_string(triple[2]) + " out of range");
        lines.push_back(triple);
    }

    try {
        return PtsFile{TripleSystem(static_cast<Point>(n), std::move(lines)),
                       std::move(comments)};
    } catch (const std::invalid_argument& e) {
        throw PtsParseError(e.what());
    } catch (const std::length_error& e) {
        throw PtsParseError(e.what());
    }
}

TripleSystem read_pts(const std::string& text) { return read_pts_full(text).system; }

void write_pts_file(const std::string& path, const TripleSystem& s,
                    const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << write_pts(s, comments);
    if (!out) throw std::runtime_error("write failed: " + path);
}

PtsFile read_pts_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PtsParseError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_pts_full(buf.str());
}

}  // namespace fischer
