from swapalg.cli import main

raise SystemExit(main())
