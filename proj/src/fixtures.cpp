#include "fncomp/fixtures.hpp"

#include <cmath>

#include "json.hpp"

namespace fncomp {

namespace {

using nlohmann::json;

json entry(const std::string& x, const std::string& y, const std::string& z,
           double p) {
    return {{"x", x}, {"y", y}, {"z", z}, {"p", p}};
}
json fentry(const std::string& x, const std::string& y, const std::string& z,
            const std::string& v) {
    return {{"x", x}, {"y", y}, {"z", z}, {"v", v}};
}

// Example 1: X,Y uniform over off-diagonal pairs of {1..4}, f = [x > y].
json ex1_doc() {
    json doc;
    doc["description"] =
        "uniform off-diagonal pairs on {1,2,3,4}; decide whether X > Y";
    doc["X"] = {"1", "2", "3", "4"};
    doc["Y"] = {"1", "2", "3", "4"};
    doc["Z"] = {"*"};
    doc["F"] = {"0", "1"};
    json p = json::array(), f = json::array();
    for (int x = 1; x <= 4; ++x)
        for (int y = 1; y <= 4; ++y) {
            if (x != y)
                p.push_back(entry(std::to_string(x), std::to_string(y), "*",
                                  1.0 / 12.0));
            f.push_back(fentry(std::to_string(x), std::to_string(y), "*",
                               x > y ? "1" : "0"));
        }
    doc["p"] = p;
    doc["f"] = f;
    return doc;
}

// Example 2: mod-2 sum of symmetric binary sources, parameterized by p.
json ex2_doc(double pdiag) {
    json doc;
    doc["description"] = "mod-2 sum of binary sources, symmetric pmf";
    doc["X"] = {"0", "1"};
    doc["Y"] = {"0", "1"};
    doc["Z"] = {"*"};
    doc["F"] = {"0", "1"};
    json p = json::array(), f = json::array();
    for (int x = 0; x <= 1; ++x)
        for (int y = 0; y <= 1; ++y) {
            double mass = x == y ? pdiag / 2.0 : (1.0 - pdiag) / 2.0;
            if (mass > 0.0)
                p.push_back(entry(std::to_string(x), std::to_string(y), "*", mass));
            f.push_back(fentry(std::to_string(x), std::to_string(y), "*",
                               ((x + y) % 2) ? "1" : "0"));
        }
    doc["p"] = p;
    doc["f"] = f;
    return doc;
}

// Example 3: X = Z+U, Y = Z+V with U ~ unif{-1,0,1}, V ~ unif{0,1,2},
// Z ~ unif{1,2,3} (Z's law is an assumption, recorded in the description),
// f = [x == y].
json ex3_doc() {
    json doc;
    doc["description"] =
        "X=Z+U, Y=Z+V, equality test; Z assumed uniform on {1,2,3}";
    doc["X"] = {"0", "1", "2", "3", "4"};
    doc["Y"] = {"1", "2", "3", "4", "5"};
    doc["Z"] = {"1", "2", "3"};
    doc["F"] = {"0", "1"};
    json p = json::array(), f = json::array();
    for (int z = 1; z <= 3; ++z)
        for (int u = -1; u <= 1; ++u)
            for (int v = 0; v <= 2; ++v)
                p.push_back(entry(std::to_string(z + u), std::to_string(z + v),
                                  std::to_string(z), 1.0 / 27.0));
    for (int x = 0; x <= 4; ++x)
        for (int y = 1; y <= 5; ++y)
            for (int z = 1; z <= 3; ++z)
                f.push_back(fentry(std::to_string(x), std::to_string(y),
                                   std::to_string(z), x == y ? "1" : "0"));
    doc["p"] = p;
    doc["f"] = f;
    return doc;
}

// Example 4: f(x,y) = (-1)^y * x on {0,1,2}^2 with a fixed full-support pmf.
json ex4_doc() {
    json doc;
    doc["description"] = "f(x,y) = (-1)^y x; partially invertible w.r.t. X";
    doc["X"] = {"0", "1", "2"};
    doc["Y"] = {"0", "1", "2"};
    doc["Z"] = {"*"};
    doc["F"] = {"-2", "-1", "0", "1", "2"};
    const double table[3][3] = {{.21, .03, .12}, {.06, .15, .16}, {.03, .12, .12}};
    json p = json::array(), f = json::array();
    for (int x = 0; x <= 2; ++x)
        for (int y = 0; y <= 2; ++y) {
            p.push_back(entry(std::to_string(x), std::to_string(y), "*",
                              table[x][y]));
            int value = (y % 2 ? -1 : 1) * x;
            f.push_back(fentry(std::to_string(x), std::to_string(y), "*",
                               std::to_string(value)));
        }
    doc["p"] = p;
    doc["f"] = f;
    return doc;
}

// Invertible f(x,y) = (x,y) on correlated binary sources: the computation
// region collapses to Slepian-Wolf along both the partially-invertible and
// outer-bound routes.
json exinv_doc() {
    json doc;
    doc["description"] = "invertible f(x,y) = (x,y) on correlated binary sources";
    doc["X"] = {"0", "1"};
    doc["Y"] = {"0", "1"};
    doc["Z"] = {"*"};
    doc["F"] = {"00", "01", "10", "11"};
    const double table[2][2] = {{0.4, 0.1}, {0.2, 0.3}};
    json p = json::array(), f = json::array();
    for (int x = 0; x <= 1; ++x)
        for (int y = 0; y <= 1; ++y) {
            p.push_back(entry(std::to_string(x), std::to_string(y), "*",
                              table[x][y]));
            f.push_back(fentry(std::to_string(x), std::to_string(y), "*",
                               std::to_string(x) + std::to_string(y)));
        }
    doc["p"] = p;
    doc["f"] = f;
    return doc;
}

} // namespace

std::string fixture_document(const std::string& name) {
    if (name == "ex1") return ex1_doc().dump(2);
    if (name == "ex3") return ex3_doc().dump(2);
    if (name == "ex4") return ex4_doc().dump(2);
    if (name == "exinv") return exinv_doc().dump(2);
    if (name == "ex2") return ex2_doc(0.75).dump(2);
    if (name.rfind("ex2:", 0) == 0) {
        double p = std::stod(name.substr(4));
        if (!(p > 0.0 && p < 1.0))
            fail(ErrorKind::Hypothesis, "ex2 parameter must lie in (0,1)");
        return ex2_doc(p).dump(2);
    }
    fail(ErrorKind::Schema, "unknown fixture '" + name + "'");
}

ProblemSpec fixture(const std::string& name) {
    return load_problem(fixture_document(name));
}

bool is_fixture_name(const std::string& name) {
    return name == "ex1" || name == "ex2" || name.rfind("ex2:", 0) == 0 ||
           name == "ex3" || name == "ex4" || name == "exinv";
}

std::vector<std::string> fixture_names() {
    return {"ex1", "ex2:p", "ex3", "ex4", "exinv"};
}

} // namespace fncomp
