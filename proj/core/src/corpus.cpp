#include "jokemeter/corpus.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "jokemeter/csv.hpp"

namespace jokemeter {

namespace {

struct SpanPos {
    std::size_t open;   // index of '<'
    std::size_t close;  // index just past "/>"
};

SpanPos find_span(const std::string& original, int row) {
    auto open = original.find('<');
    auto close = original.find("/>");
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw MalformedRow(row, "missing <.../> span marker in original");
    if (original.find('<', open + 1) != std::string::npos ||
        original.find("/>", close + 2) != std::string::npos)
        throw MalformedRow(row, "more than one marked span in original");
    return {open, close + 2};
}

std::vector<int> parse_grades(const std::string& s, int row) {
    if (s.size() < 5) throw MalformedRow(row, "fewer than five grades: '" + s + "'");
    std::vector<int> grades;
    for (std::size_t i = 0; i < 5; ++i) {
        char c = s[i];
        if (c < '0' || c > '3') throw MalformedRow(row, "grade character out of {0..3}");
        grades.push_back(c - '0');
    }
    for (std::size_t i = 1; i < grades.size(); ++i)
        if (grades[i] > grades[i - 1]) throw MalformedRow(row, "grades not descending");
    return grades;
}

double parse_mean(const std::string& s, int row) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw MalformedRow(row, "unparseable mean grade: '" + s + "'");
    }
    if (pos != s.size()) throw MalformedRow(row, "trailing junk in mean grade");
    if (v < 0.0 || v > 3.0) throw MalformedRow(row, "mean grade outside [0,3]");
    return v;
}

HeadlineEdit make_edit(const std::string& id, const std::string& original,
                       const std::string& edit, const std::string& grades,
                       const std::string& mean, int row) {
    HeadlineEdit h;
    h.id = id;
    h.original = original;
    h.edit = edit;
    find_span(original, row);
    h.grades = parse_grades(grades, row);
    h.mean_grade = parse_mean(mean, row);
    return h;
}

std::string grades_to_string(const std::vector<int>& grades) {
    std::string s;
    for (int g : grades) s += static_cast<char>('0' + g);
    return s;
}

std::string mean_to_string(double m) {
    std::ostringstream os;
    os << m;
    return os.str();
}

void warn_or_throw(const ParseOptions& opts, const MalformedRow& e) {
    if (!opts.lenient) throw e;
    if (opts.warnings) opts.warnings->push_back(e.what());
}

void check_unique_ids(const std::vector<std::string>& ids) {
    std::set<std::string> seen;
    for (const auto& id : ids)
        if (!seen.insert(id).second)
            throw std::runtime_error("duplicate id in dataset: " + id);
}

}  // namespace

Task1Dataset parse_task1_file(const std::string& path, ParseOptions opts) {
    auto lines = csv::read_lines(path);
    if (lines.empty()) throw std::runtime_error("empty file: " + path);
    Task1Dataset ds;
    std::vector<std::string> ids;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        int row = static_cast<int>(i);
        auto f = csv::split_row(lines[i]);
        try {
            if (f.size() != 5) throw MalformedRow(row, "expected 5 columns");
            ds.records.push_back(make_edit(f[0], f[1], f[2], f[3], f[4], row));
            ids.push_back(f[0]);
        } catch (const MalformedRow& e) {
            warn_or_throw(opts, e);
        }
    }
    check_unique_ids(ids);
    return ds;
}

Task2Dataset parse_task2_file(const std::string& path, ParseOptions opts) {
    auto lines = csv::read_lines(path);
    if (lines.empty()) throw std::runtime_error("empty file: " + path);
    Task2Dataset ds;
    std::vector<std::string> ids;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        int row = static_cast<int>(i);
        auto f = csv::split_row(lines[i]);
        try {
            if (f.size() != 9 && f.size() != 10)
                throw MalformedRow(row, "expected 9 or 10 columns");
            EditPair p;
            p.id = f[0];
            p.first = make_edit(f[0] + "-1", f[1], f[2], f[3], f[4], row);
            p.second = make_edit(f[0] + "-2", f[5], f[6], f[7], f[8], row);
            if (strip_marker(p.first.original) != strip_marker(p.second.original))
                throw MalformedRow(row, "pair originals differ");
            if (f.size() == 10) {
                if (f[9] != "1" && f[9] != "2")
                    throw MalformedRow(row, "label must be 1 or 2");
                p.label = f[9] == "1" ? 1 : 2;
            }
            ds.records.push_back(std::move(p));
            ids.push_back(f[0]);
        } catch (const MalformedRow& e) {
            warn_or_throw(opts, e);
        }
    }
    check_unique_ids(ids);
    return ds;
}

void write_task1_file(const std::string& path, const Task1Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << "id,original,edit,grades,meanGrade\n";
    for (const auto& h : ds.records)
        out << csv::join_row({h.id, h.original, h.edit, grades_to_string(h.grades),
                              mean_to_string(h.mean_grade)})
            << "\n";
}

void write_task2_file(const std::string& path, const Task2Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << "id,original1,edit1,grades1,meanGrade1,original2,edit2,grades2,meanGrade2,label\n";
    for (const auto& p : ds.records) {
        std::vector<std::string> f = {
            p.id,
            p.first.original, p.first.edit, grades_to_string(p.first.grades),
            mean_to_string(p.first.mean_grade),
            p.second.original, p.second.edit, grades_to_string(p.second.grades),
            mean_to_string(p.second.mean_grade)};
        if (p.label) f.push_back(std::to_string(*p.label));
        out << csv::join_row(f) << "\n";
    }
}

std::string apply_edit(const HeadlineEdit& h) {
    auto span = find_span(h.original, 0);
    return h.original.substr(0, span.open) + h.edit + h.original.substr(span.close);
}

std::string strip_marker(const std::string& original) {
    auto open = original.find('<');
    auto close = original.find("/>");
    if (open == std::string::npos || close == std::string::npos) return original;
    return original.substr(0, open) + original.substr(open + 1, close - open - 1) +
           original.substr(close + 2);
}

double first_five_mean(const std::vector<int>& grades) {
    if (grades.size() != 5)
        throw std::invalid_argument("first_five_mean needs exactly five grades");
    int sum = 0;
    for (int g : grades) sum += g;
    return sum / 5.0;
}

}  // namespace jokemeter
