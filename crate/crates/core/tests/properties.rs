mod common;

macro_rules! props {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                if let Err(e) = common::$name() {
                    panic!("{e}");
                }
            }
        )*
    };
}

props!(
    ring_laws,
    reduce_morphism,
    division,
    truncation,
    bracket_identity,
    vp_derivation,
    vp_iteration,
    vp_additive,
    cleared_recursion,
    cleared_mod_p,
    certificate_bounds,
    linearize_one,
    linearize_two,
);

#[test]
fn registry_lists_every_property() {
    assert_eq!(common::PROPERTIES.len(), 13);
}
