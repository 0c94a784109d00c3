#pragma once

// Atomic file output (temp file + rename) and a small CSV builder.

#include "error.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace agora {

/// Writes `content` to `path` through a sibling temp file, so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out)
            throw Error(ErrorCode::IoError, "write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot move output into place at '" + path.string() + "'");
    }
}

/// Sidecar holding the config that produced `output`: "<output>.config.json".
inline std::filesystem::path sidecar_path(const std::filesystem::path& output)
{
    auto p = output;
    p += ".config.json";
    return p;
}

class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& header) : columns_(header.size()) { row(header); }

    template <class... Cells>
    CsvBuilder& add(const Cells&... cells)
    {
        std::vector<std::string> r{cell(cells)...};
        return row(r);
    }

    CsvBuilder& row(const std::vector<std::string>& cells)
    {
        if (cells.size() != columns_)
            throw Error(ErrorCode::InvalidArgument, "CSV row has " + std::to_string(cells.size()) +
                                                        " cells, header has " + std::to_string(columns_));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out_ << ',';
            out_ << escape(cells[i]);
        }
        out_ << '\n';
        return *this;
    }

    std::string str() const { return out_.str(); }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class T>
    static std::string cell(const T& v)
    {
        std::ostringstream os;
        os << v;
        return os.str();
    }

    static std::string escape(const std::string& s)
    {
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"')
                q += '"';
            q += c;
        }
        return q + '"';
    }

    std::size_t columns_;
    std::ostringstream out_;
};

} // namespace agora
