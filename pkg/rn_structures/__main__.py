from rn_structures.api.main import main

main()
