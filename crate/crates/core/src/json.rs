//! Canonical JSON output: keys sorted alphabetically, two-space indent,
//! trailing newline.

use serde::Serialize;

/// Serializes `value` with alphabetically ordered object keys.
///
/// Going through `serde_json::Value` sorts keys because the crate is built
/// without the `preserve_order` feature, so `Map` is a `BTreeMap`.
pub fn to_canonical_string<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let value = serde_json::to_value(value)?;
    let mut out = serde_json::to_string_pretty(&value)?;
    out.push('\n');
    Ok(out)
}
