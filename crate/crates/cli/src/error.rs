use walks_core::kernel_pipeline::PipelineError;

/// Typed name of an error, e.g. `PipelineError::Form::SingularSystem`, read off the derived
/// Debug output and descending through the wrapped module errors.
pub fn error_name(e: &PipelineError) -> String {
    let dbg = format!("{e:?}");
    let mut parts = vec!["PipelineError"];
    let mut rest = dbg.as_str();
    loop {
        let end = rest.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(rest.len());
        let name = &rest[..end];
        parts.push(name);
        match rest[end..].strip_prefix('(') {
            Some(inner) if matches!(name, "Form" | "Series") => rest = inner,
            _ => break,
        }
    }
    parts.join("::")
}

#[cfg(test)]
mod tests {
    use super::*;
    use walks_core::exact_series::SeriesError;
    use walks_core::linear_forms::FormError;

    #[test]
    fn names_nested_variants() {
        let e = PipelineError::PrecisionExhausted { needed: 3, reached: 1, working: 6 };
        assert_eq!(error_name(&e), "PipelineError::PrecisionExhausted");
        let e = PipelineError::Form(FormError::Series(SeriesError::ZeroSeries(None)));
        assert_eq!(error_name(&e), "PipelineError::Form::Series::ZeroSeries");
        let e = PipelineError::Series(SeriesError::DivisibilityFailure { order: 2, detail: String::new() });
        assert_eq!(error_name(&e), "PipelineError::Series::DivisibilityFailure");
    }
}
