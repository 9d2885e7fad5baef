#pragma once

#define FITWAVE_VERSION "0.1.0"
#define FITWAVE_SCHEMA_VERSION 1
