#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jokemeter {

struct MalformedRow : std::runtime_error {
    int row;
    MalformedRow(int row_, const std::string& reason)
        : std::runtime_error("row " + std::to_string(row_) + ": " + reason), row(row_) {}
};

// One Sub-Task 1 record. `original` contains exactly one span marked
// `<word/>`; `grades` holds the first five annotator grades, descending.
struct HeadlineEdit {
    std::string id;
    std::string original;
    std::string edit;
    std::vector<int> grades;  // length 5, each in {0..3}, non-increasing
    double mean_grade = 0.0;  // regression target as read from file
};

// One Sub-Task 2 record: two edits of the same original headline.
struct EditPair {
    std::string id;
    HeadlineEdit first;
    HeadlineEdit second;
    std::optional<int> label;  // 1 or 2, absent for unlabeled test data
};

enum class Split { train, dev, test };

struct Task1Dataset {
    Split split = Split::train;
    std::vector<HeadlineEdit> records;
};

struct Task2Dataset {
    Split split = Split::train;
    std::vector<EditPair> records;
};

// Strict mode throws MalformedRow on the first bad row; lenient skips it
// and records a warning.
struct ParseOptions {
    bool lenient = false;
    std::vector<std::string>* warnings = nullptr;
};

Task1Dataset parse_task1_file(const std::string& path, ParseOptions opts = {});
Task2Dataset parse_task2_file(const std::string& path, ParseOptions opts = {});

void write_task1_file(const std::string& path, const Task1Dataset& ds);
void write_task2_file(const std::string& path, const Task2Dataset& ds);

// Original with the marked span replaced by the edit word, markers removed.
std::string apply_edit(const HeadlineEdit& h);

// The unmarked surface text of the original (markers stripped, span kept).
std::string strip_marker(const std::string& original);

// Arithmetic mean of exactly five grades.
double first_five_mean(const std::vector<int>& grades);

}  // namespace jokemeter
