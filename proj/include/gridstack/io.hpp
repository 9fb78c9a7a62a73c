#ifndef GRIDSTACK_IO_HPP
#define GRIDSTACK_IO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gridstack/core_model.hpp"
#include "gridstack/pricing.hpp"

namespace gridstack {

/// Invalid configuration; `field()` is the JSON path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct GameConfig {
    GameG1 game;
    std::optional<LeaderParams> leader;
    /// Alpha and beta values to search; gamma and leader come from the game.
    std::optional<PricingGrid> grid;
};

/// Number or rational string such as "5/11".
double parse_number(const nlohmann::json& value, const std::string& field);

GameConfig config_from_json(const nlohmann::json& doc);
GameConfig load_config(const std::string& path);

nlohmann::json chain_to_json(const ForecastChain& chain);
nlohmann::json config_to_json(const GameConfig& config);

/// 64-bit FNV-1a hash as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

void write_text(const std::string& path, const std::string& text);

} // namespace gridstack

#endif
