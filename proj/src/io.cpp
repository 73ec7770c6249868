#include "spp/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace spp {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        // Trim whitespace and a possible trailing CR.
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, const std::string& path, long line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": not a number: '" + s + "'");
    }
}

const json* find_polygon(const json& j) {
    if (!j.is_object()) return nullptr;
    const auto type = j.value("type", std::string{});
    if (type == "Polygon") return &j;
    if (type == "Feature" && j.contains("geometry"))
        return find_polygon(j.at("geometry"));
    if (type == "FeatureCollection" && j.contains("features") &&
        j.at("features").is_array() && !j.at("features").empty())
        return find_polygon(j.at("features").at(0));
    return nullptr;
}

}  // namespace

std::shared_ptr<const Window> load_window(const std::string& path,
                                          const Projection* projection) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open window file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
    }
    const json* poly = find_polygon(j);
    if (poly == nullptr || !poly->contains("coordinates"))
        throw std::runtime_error(path + ": no Polygon geometry found");

    std::vector<Ring> rings;
    for (const auto& jring : poly->at("coordinates")) {
        Ring ring;
        for (const auto& coord : jring) {
            if (!coord.is_array() || coord.size() < 2)
                throw std::runtime_error(path + ": malformed coordinate");
            const double a = coord.at(0).get<double>();
            const double b = coord.at(1).get<double>();
            ring.push_back(projection ? projection->forward({a, b})
                                      : PlanarPoint{a, b});
        }
        rings.push_back(std::move(ring));
    }
    return std::make_shared<Window>(std::move(rings));
}

PointsFile load_points_csv(const std::string& path, const Projection* projection) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open points file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file (header expected)");
    const auto header = split_csv_line(line);
    if (header.size() < 3)
        throw std::runtime_error(path + ": expected header id,x,y[,mark]");
    const bool has_mark = header.size() >= 4;

    PointsFile out;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 3 || (has_mark && fields.size() < 4))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": wrong number of fields");
        const double a = parse_double(fields[1], path, line_no);
        const double b = parse_double(fields[2], path, line_no);
        out.ids.push_back(fields[0]);
        out.points.push_back(projection ? projection->forward({a, b})
                                        : PlanarPoint{a, b});
        if (has_mark) out.marks.push_back(parse_double(fields[3], path, line_no));
    }
    return out;
}

void write_points_csv(const std::string& path, const PointPattern& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << (p.has_marks() ? "id,x,y,mark\n" : "id,x,y\n");
    char buf[192];
    for (long i = 0; i < p.n(); ++i) {
        const auto& pt = p.points()[static_cast<std::size_t>(i)];
        if (p.has_marks())
            std::snprintf(buf, sizeof buf, "%ld,%.12g,%.12g,%.12g\n", i, pt.x, pt.y,
                          p.marks()[static_cast<std::size_t>(i)]);
        else
            std::snprintf(buf, sizeof buf, "%ld,%.12g,%.12g\n", i, pt.x, pt.y);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ObservationGroup> load_groups_csv(const std::string& path,
                                              const Projection* projection) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open groups file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file (header expected)");
    if (split_csv_line(line).size() < 3)
        throw std::runtime_error(path + ": expected header group_id,x,y");

    // Groups keep first-appearance order; rows of one group need not be
    // consecutive.
    std::vector<ObservationGroup> groups;
    std::map<std::string, std::size_t> index;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 3)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": wrong number of fields");
        const double a = parse_double(fields[1], path, line_no);
        const double b = parse_double(fields[2], path, line_no);
        const PlanarPoint pt =
            projection ? projection->forward({a, b}) : PlanarPoint{a, b};
        auto [it, inserted] = index.try_emplace(fields[0], groups.size());
        if (inserted) groups.push_back({fields[0], {}});
        groups[it->second].witness_points.push_back(pt);
    }
    return groups;
}

}  // namespace spp
