// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kakeya/error.hpp"
#include "kakeya/lab/config.hpp"

namespace kakeya::lab {

using json = nlohmann::ordered_json;

// RFC 4180: CRLF line ends, fields quoted when they hold a comma, quote or
// line break.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) {
        if (row.size() != header_.size()) throw invalid_input("csv row has wrong width");
        rows_.push_back(std::move(row));
    }
    std::size_t size() const noexcept { return rows_.size(); }

    std::string str() const {
        std::string out;
        line(out, header_);
        for (const auto& r : rows_) line(out, r);
        return out;
    }

    static std::string field(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }

private:
    static void line(std::string& out, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += field(cells[i]);
        }
        out += "\r\n";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Writes the artifacts of one run into a directory. Every CSV gets a
// leading config_hash column, every JSON document a config_hash member and
// every SVG a comment carrying the hash.
class ArtifactWriter {
public:
    ArtifactWriter(std::string dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw invalid_input("cannot create output directory " + dir_ + ": " + ec.message());
    }

    const std::string& hash() const noexcept { return hash_; }
    const std::vector<std::string>& written() const noexcept { return written_; }

    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows) {
        std::vector<std::string> h{"config_hash"};
        h.insert(h.end(), header.begin(), header.end());
        CsvTable t(std::move(h));
        for (const auto& r : rows) {
            std::vector<std::string> row{hash_};
            row.insert(row.end(), r.begin(), r.end());
            t.add(std::move(row));
        }
        text(name, t.str());
    }

    void document(const std::string& name, json doc) {
        json out;
        out["config_hash"] = hash_;
        for (auto& [k, v] : doc.items()) out[k] = std::move(v);
        text(name, out.dump(2) + "\n");
    }

    void text(const std::string& name, const std::string& content) {
        const auto path = (std::filesystem::path(dir_) / name).string();
        std::ofstream os(path, std::ios::binary);
        if (!os) throw invalid_input("cannot write " + path);
        os << content;
        if (!os) throw invalid_input("write failed: " + path);
        written_.push_back(path);
    }

private:
    std::string dir_;
    std::string hash_;
    std::vector<std::string> written_;
};

} // namespace kakeya::lab
