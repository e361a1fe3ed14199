from projcocycle.cli import main

main()
