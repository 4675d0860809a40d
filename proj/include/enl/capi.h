#ifndef ENL_CAPI_H
#define ENL_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ENL_API __declspec(dllexport)
#else
#define ENL_API __attribute__((visibility("default")))
#endif

/* Status codes; ENL_OK is 0, every other value is an error. */
enum {
    ENL_OK = 0,
    ENL_E_NON_REFINING_FILTRATION = 1,
    ENL_E_BAD_WEIGHTS = 2,
    ENL_E_TIME_OUT_OF_RANGE = 3,
    ENL_E_MEASURABILITY = 4,
    ENL_E_NOT_MARTINGALE = 5,
    ENL_E_DOMAIN = 6,
    ENL_E_TERM_OUT_OF_RANGE = 7,
    ENL_E_ASSUMPTION_VIOLATED = 8,
    ENL_E_NOT_ADMISSIBLE = 9,
    ENL_E_BUDGET_EXCEEDED = 10,
    ENL_E_DEGENERATE_MODEL = 11,
    ENL_E_CONFIG = 12,
    ENL_E_INVALID_ARGUMENT = 13,
    ENL_E_INTERNAL = 99
};

/* Stage mask for enl_scenario_run. */
enum {
    ENL_STAGE_VERIFY = 1,
    ENL_STAGE_PRICE = 2,
    ENL_STAGE_HEDGE = 4,
    ENL_STAGE_REPORT = 8,
    ENL_STAGE_ALL = 15
};

typedef struct enl_scenario enl_scenario;
typedef struct enl_model enl_model;

typedef struct enl_run_options {
    int exact;          /* 1: rational arithmetic, 0: double */
    double tol;         /* < 0 keeps the scenario tolerance */
    int has_seed;
    uint64_t seed;
    int count;          /* <= 0 keeps the scenario / default count */
    const char* out_dir; /* NULL or "" keeps the scenario output path */
    unsigned stages;
    int flip_ng_sign;   /* mutation control for the verify battery */
} enl_run_options;

ENL_API void enl_run_options_init(enl_run_options* o);

/* Message of the last failing call on this thread. */
ENL_API const char* enl_last_error(void);
ENL_API const char* enl_status_name(int status);
ENL_API void enl_string_free(char* s);

ENL_API int enl_scenario_parse(const char* text, enl_scenario** out);
ENL_API int enl_scenario_load(const char* path, enl_scenario** out);
ENL_API void enl_scenario_free(enl_scenario* s);

/* Runs the stages; *report is a JSON document, *failures the number of failed checks. */
ENL_API int enl_scenario_run(const enl_scenario* s, const enl_run_options* o, char** report, int* failures);

/* Randomized battery on generated instances. */
ENL_API int enl_verify_random(const enl_run_options* o, char** report, int* failures);

/* Model handle: the enlarged space of a scenario in the chosen arithmetic. */
ENL_API int enl_model_build(const enl_scenario* s, int exact, enl_model** out);
ENL_API void enl_model_free(enl_model* m);
ENL_API int enl_model_shape(const enl_model* m, int* paths, int* horizon, int* assets);
/* path,time,G,Gtilde,m,dNG,dNGbar; precision < 0 prints exact values. */
ENL_API int enl_model_bundle_csv(const enl_model* m, int precision, char** csv);
/* Value of the Azema supermartingale G at (path, t) as a double. */
ENL_API int enl_model_survival(const enl_model* m, int path, int t, double* value);
/* Price decomposition of the scenario contract `index` as JSON. */
ENL_API int enl_model_price(const enl_model* m, int index, int precision, char** json);

#ifdef __cplusplus
}
#endif

#endif
