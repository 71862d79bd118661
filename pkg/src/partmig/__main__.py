from partmig.cli import main

raise SystemExit(main())
