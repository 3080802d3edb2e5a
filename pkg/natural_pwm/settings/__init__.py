# make settings a package
