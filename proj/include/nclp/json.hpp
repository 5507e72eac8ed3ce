#pragma once

// Single place that pulls in nlohmann/json (vendored single header).
#include <json.hpp>
