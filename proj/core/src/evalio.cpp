#include "jokemeter/evalio.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "jokemeter/csv.hpp"

namespace jokemeter {

namespace {

std::map<std::string, double> by_id(const std::vector<Prediction>& v, const char* what) {
    std::map<std::string, double> m;
    for (const auto& p : v)
        if (!m.emplace(p.id, p.value).second)
            throw std::invalid_argument(std::string("duplicate id in ") + what + ": " + p.id);
    return m;
}

std::map<std::string, std::pair<double, double>> join(const std::vector<Prediction>& preds,
                                                      const std::vector<Prediction>& truths) {
    auto pm = by_id(preds, "predictions");
    auto tm = by_id(truths, "truths");
    if (pm.empty()) throw std::invalid_argument("empty prediction set");
    std::map<std::string, std::pair<double, double>> joined;
    for (const auto& [id, t] : tm) {
        auto it = pm.find(id);
        if (it == pm.end()) throw std::invalid_argument("missing prediction for id: " + id);
        joined.emplace(id, std::make_pair(it->second, t));
    }
    if (pm.size() != tm.size())
        throw std::invalid_argument("extra predictions with no matching truth id");
    return joined;
}

}  // namespace

double rmse(const std::vector<Prediction>& preds, const std::vector<Prediction>& truths) {
    auto joined = join(preds, truths);
    double se = 0.0;
    for (const auto& [id, pt] : joined) se += (pt.first - pt.second) * (pt.first - pt.second);
    return std::sqrt(se / joined.size());
}

double accuracy(const std::vector<Prediction>& preds, const std::vector<Prediction>& truths) {
    auto joined = join(preds, truths);
    long correct = 0;
    for (const auto& [id, pt] : joined)
        if (pt.first == pt.second) ++correct;
    return static_cast<double>(correct) / joined.size();
}

void write_predictions(const std::string& path, PredTask task,
                       const std::vector<Prediction>& preds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write predictions: " + path);
    out << "id,pred\n";
    for (const auto& p : preds) {
        out << csv::quote_field(p.id) << ",";
        if (task == PredTask::task2) out << static_cast<int>(p.value);
        else out << std::setprecision(9) << p.value;
        out << "\n";
    }
}

std::vector<Prediction> read_predictions(const std::string& path, PredTask task) {
    auto lines = csv::read_lines(path);
    if (lines.empty() || lines[0] != "id,pred")
        throw std::runtime_error("bad prediction file header: " + path);
    std::vector<Prediction> preds;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = csv::split_row(lines[i]);
        if (f.size() != 2)
            throw std::runtime_error(path + ": malformed line " + std::to_string(i + 1));
        double v;
        try {
            std::size_t pos = 0;
            v = std::stod(f[1], &pos);
            if (pos != f[1].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw std::runtime_error(path + ": bad value at line " + std::to_string(i + 1));
        }
        if (task == PredTask::task2 && v != 1.0 && v != 2.0)
            throw std::runtime_error(path + ": Task 2 label must be 1 or 2 at line " +
                                     std::to_string(i + 1));
        preds.push_back({f[0], v});
    }
    return preds;
}

}  // namespace jokemeter
