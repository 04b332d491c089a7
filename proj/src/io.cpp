#include "curvkit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace curvkit {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

OrientedPointCloud read_xyz(const std::string& path, XyzStats* stats) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open '" + path + "'");

    OrientedPointCloud cloud;
    int arity = 0;  // 3 or 6 once decided
    std::string line;
    std::size_t lineno = 0;
    std::size_t renormalized = 0;

    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream ss(line);
        double v[6];
        int count = 0;
        while (count < 6 && (ss >> v[count])) ++count;
        std::string rest;
        bool trailing = static_cast<bool>(ss >> rest);

        if ((count != 3 && count != 6) || trailing)
            throw invalid_input(path + ":" + std::to_string(lineno) +
                                ": expected 3 or 6 numeric fields");
        if (arity == 0)
            arity = count;
        else if (arity != count)
            throw invalid_input(path + ":" + std::to_string(lineno) +
                                ": mixed 3-field and 6-field lines");

        Vec3 p{v[0], v[1], v[2]};
        if (!p.finite())
            throw invalid_input(path + ":" + std::to_string(lineno) +
                                ": non-finite coordinate");
        cloud.positions.push_back(p);
        if (count == 6) {
            Vec3 n{v[3], v[4], v[5]};
            double len = norm(n);
            if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-3)
                throw invalid_input(path + ":" + std::to_string(lineno) +
                                    ": normal is not unit length");
            if (std::abs(len - 1.0) > 1e-12) ++renormalized;
            cloud.normals.push_back(n / len);
        }
    }
    if (cloud.positions.empty())
        throw invalid_input(path + ": no points");
    if (stats) stats->renormalized = renormalized;
    return cloud;
}

void write_xyz(const OrientedPointCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot open '" + path + "' for writing");
    const bool oriented = cloud.oriented();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.positions[i];
        out << fmt17(p.x) << ' ' << fmt17(p.y) << ' ' << fmt17(p.z);
        if (oriented) {
            const Vec3& n = cloud.normals[i];
            out << ' ' << fmt17(n.x) << ' ' << fmt17(n.y) << ' ' << fmt17(n.z);
        }
        out << '\n';
    }
    if (!out)
        throw io_error("write failed for '" + path + "'");
}

void write_curvature_csv(const CurvatureField& field, const OrientedPointCloud& cloud,
                         const std::string& path) {
    if (field.size() != cloud.size())
        throw invalid_input("write_curvature_csv: field/cloud size mismatch");
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot open '" + path + "' for writing");
    out << "id,x,y,z,K,H,k1,k2,d1x,d1y,d1z,d2x,d2y,d2z,asym,flag\n";
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Vec3& p = cloud.positions[i];
        const CurvatureSet& c = field.curvatures[i];
        out << i << ',' << fmt17(p.x) << ',' << fmt17(p.y) << ',' << fmt17(p.z) << ','
            << fmt17(c.gaussian) << ',' << fmt17(c.mean) << ',' << fmt17(c.kappa1) << ','
            << fmt17(c.kappa2) << ',' << fmt17(c.dir1.x) << ',' << fmt17(c.dir1.y) << ','
            << fmt17(c.dir1.z) << ',' << fmt17(c.dir2.x) << ',' << fmt17(c.dir2.y) << ','
            << fmt17(c.dir2.z) << ',' << fmt17(c.asymmetry) << ','
            << static_cast<int>(field.flags.empty() ? 0 : field.flags[i]) << '\n';
    }
    if (!out)
        throw io_error("write failed for '" + path + "'");
}

CurvatureCsv read_curvature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open '" + path + "'");

    CurvatureCsv csv;
    std::string line;
    std::size_t lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("id,", 0) != 0)
                throw invalid_input(path + ": missing curvature CSV header");
            continue;
        }
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> fields;
        while (std::getline(ss, cell, ',')) {
            try {
                fields.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw invalid_input(path + ":" + std::to_string(lineno) +
                                    ": bad numeric field '" + cell + "'");
            }
        }
        if (fields.size() != 16)
            throw invalid_input(path + ":" + std::to_string(lineno) +
                                ": expected 16 fields");
        csv.gaussian.push_back(fields[4]);
        csv.mean.push_back(fields[5]);
        csv.kappa1.push_back(fields[6]);
        csv.kappa2.push_back(fields[7]);
    }
    if (csv.gaussian.empty())
        throw invalid_input(path + ": no curvature rows");
    return csv;
}

}  // namespace curvkit
