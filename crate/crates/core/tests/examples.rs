macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run().unwrap();
        }
    };
}

example!(gcode_tags);
example!(responsibility_graph);
example!(commitment_chain);
example!(context_drift);
example!(msa_pipeline);
example!(score_cases);
example!(group_statistics);
example!(simulate_debate);
example!(http_service);
