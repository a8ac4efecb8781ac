#ifndef TAMBARIZE_H
#define TAMBARIZE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t TzStatus;

#define TZ_OK 0
#define TZ_VIOLATIONS 1
#define TZ_MALFORMED 2
#define TZ_FAILED 3
#define TZ_NULL_POINTER 4
#define TZ_INVALID_UTF8 5
#define TZ_PANIC 6

typedef struct TzGroup TzGroup;
typedef struct TzJob TzJob;
typedef struct TzResult TzResult;

/* Last error on the calling thread, or NULL. Valid until the next call on that thread. */
const char *tz_last_error(void);
void tz_string_free(char *s);

TzStatus tz_group_new(const char *spec, TzGroup **out);
void tz_group_free(TzGroup *group);
size_t tz_group_order(const TzGroup *group);
size_t tz_group_subgroup_count(const TzGroup *group);
size_t tz_group_class_count(const TzGroup *group);
/* Owned; free with tz_string_free. */
char *tz_group_name(const TzGroup *group);

/* command: table | verify | adjunction | crossed | witt | marks */
TzStatus tz_job_new(const char *command, const char *group, TzJob **out);
void tz_job_free(TzJob *job);
/* key: monoid | functor | level | seed | samples | format */
TzStatus tz_job_set(TzJob *job, const char *key, const char *value);
/* Returns TZ_OK or TZ_VIOLATIONS with *out set, otherwise an error and *out = NULL. */
TzStatus tz_job_run(const TzJob *job, TzResult **out);

void tz_result_free(TzResult *result);
size_t tz_result_violations(const TzResult *result);
int32_t tz_result_exit_code(const TzResult *result);
/* Owned; free with tz_string_free. */
char *tz_result_render(const TzResult *result);

#ifdef __cplusplus
}
#endif

#endif
