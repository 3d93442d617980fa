#include "dualgroup/config.hpp"

#include <fstream>
#include <sstream>

#include "dualgroup/error.hpp"

namespace dualgroup {

namespace {

std::string trim(const std::string& s) {
    const size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' expects a number, got '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' expects an integer, got '" + value +
                              "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ValidationError("config: key '" + key + "' expects true/false, got '" + value + "'");
}

}  // namespace

void apply_config_override(PipelineConfig& config, const std::string& key,
                           const std::string& value) {
    if (key == "bfs_radius") config.bfs_radius = parse_double(key, value);
    else if (key == "overlap_threshold") config.overlap_threshold = parse_double(key, value);
    else if (key == "small_instance_threshold")
        config.small_instance_threshold = parse_int(key, value);
    else if (key == "select_top_alpha") config.select_top_alpha = parse_double(key, value);
    else if (key == "depth_tolerance") config.depth_tolerance = parse_double(key, value);
    else if (key == "min_cluster_size") config.min_cluster_size = parse_int(key, value);
    else if (key == "knn_k") config.knn_k = parse_int(key, value);
    else if (key == "background_classes") config.background_classes = split_list(value);
    else if (key == "normalize_embeddings")
        config.normalize_embeddings = parse_bool(key, value);
    else if (key == "self_train_iterations")
        config.self_train_iterations = parse_int(key, value);
    else if (key == "superpoint_angle_deg")
        config.superpoint_angle_deg = parse_double(key, value);
    else if (key == "superpoint_knn_normals")
        config.superpoint_knn_normals = parse_int(key, value);
    else
        throw ParseError("config", -1, "unknown key '" + key + "'");
}

PipelineConfig read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), -1, "cannot open config file");

    PipelineConfig config;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path.string(), line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            apply_config_override(config, key, value);
        } catch (const ParseError& e) {
            throw ParseError(path.string(), line_no, e.what());
        }
    }

    if (const auto violations = validate(config); !violations.empty())
        throw ValidationError(violations);
    return config;
}

void write_config(const std::filesystem::path& path, const PipelineConfig& config) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ParseError(path.string(), -1, "cannot open config file for writing");
    out << "bfs_radius = " << config.bfs_radius << "\n";
    out << "overlap_threshold = " << config.overlap_threshold << "\n";
    out << "small_instance_threshold = " << config.small_instance_threshold << "\n";
    out << "select_top_alpha = " << config.select_top_alpha << "\n";
    out << "depth_tolerance = " << config.depth_tolerance << "\n";
    out << "min_cluster_size = " << config.min_cluster_size << "\n";
    out << "knn_k = " << config.knn_k << "\n";
    out << "background_classes = ";
    for (size_t i = 0; i < config.background_classes.size(); ++i)
        out << (i ? ", " : "") << config.background_classes[i];
    out << "\n";
    out << "normalize_embeddings = " << (config.normalize_embeddings ? "true" : "false") << "\n";
    out << "self_train_iterations = " << config.self_train_iterations << "\n";
    out << "superpoint_angle_deg = " << config.superpoint_angle_deg << "\n";
    out << "superpoint_knn_normals = " << config.superpoint_knn_normals << "\n";
}

}  // namespace dualgroup
